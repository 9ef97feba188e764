#pragma once

#include <string_view>

namespace idgame {

/// Action of an agent whose day-ahead welfare factor is exactly zero.
/// Optimistic: do not trade (lowest redispatch cost for the DSO).
/// Pessimistic: trade the full schedule.
enum class IndifferenceRule { Optimistic, Pessimistic };

/// How agents form their day-ahead bid price.
enum class Scenario {
    Anticipatory,  ///< bid E[max(u, Pi^r)]
    Naive,         ///< bid the utility u
};

std::string_view to_string(IndifferenceRule rule);
std::string_view to_string(Scenario scenario);

}  // namespace idgame
