#pragma once

#include "idgame/types.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace idgame {

/// Redispatch price atom: Pi^r = price with probability weight.
struct PriceAtom {
    double price = 0.0;
    double weight = 0.0;
};

/// Discrete distribution of the redispatch price Pi^r. Quadrature nodes and
/// Monte Carlo samples are both represented as weighted atoms; weights are
/// normalized on construction.
class RedispatchDistribution {
public:
    /// Pi^r = 0 surely.
    RedispatchDistribution() : atoms_{{0.0, 1.0}} {}
    explicit RedispatchDistribution(std::vector<PriceAtom> atoms);

    static RedispatchDistribution certain(double price) {
        return RedispatchDistribution({{price, 1.0}});
    }

    /// E[[Pi^r - u]^+]
    double expected_upside(double u) const;
    /// Pr(Pi^r > u)
    double probability_above(double u) const;
    /// E[max(u, Pi^r)]
    double expected_max(double u) const { return u + expected_upside(u); }

    std::span<const PriceAtom> atoms() const noexcept { return atoms_; }

private:
    std::vector<PriceAtom> atoms_;
};

struct SecondStageDecision {
    double reduction = 0.0;    ///< e^r in kWh
    bool indifferent = false;  ///< pi_r == u; reduction reported as 0
};

/// Redispatch reduction maximizing (pi_r - u) * e_r over 0 <= e_r <= e_d.
SecondStageDecision optimal_second_stage(double e_d, double pi_r, double u);

/// g(u) = u - pi_d + E[[Pi^r - u]^+], expected welfare per kWh purchased.
double welfare_factor(double u, double pi_d, const RedispatchDistribution& redispatch);

/// e_d * g(u), in $.
double expected_welfare(double e_d, double pi_d, double u, const RedispatchDistribution& redispatch);

struct DayAheadDecision {
    double schedule = 0.0;
    bool indifferent = false;
};

inline constexpr double kIndifferenceTolerance = 1e-12;

/// e_max when g(u) > 0, 0 when g(u) < 0; within `tolerance` of zero the
/// agent is indifferent and `rule` picks (optimistic: 0, pessimistic: e_max).
DayAheadDecision optimal_day_ahead(double u, double e_max, double pi_d,
                                   const RedispatchDistribution& redispatch,
                                   IndifferenceRule rule = IndifferenceRule::Optimistic,
                                   double tolerance = kIndifferenceTolerance);

struct Bid {
    double quantity = 0.0;  ///< kWh
    double price = 0.0;     ///< $/kWh

    friend bool operator==(const Bid&, const Bid&) = default;
};

/// (e_max, E[max(u, Pi^r)]).
Bid optimal_bid(double u, double e_max, const RedispatchDistribution& redispatch);

/// Pay-as-cleared acceptance of a single bid at clearing price pi_d; bids
/// within `tolerance` of pi_d follow `rule`.
double accepted_quantity(const Bid& bid, double pi_d,
                         IndifferenceRule rule = IndifferenceRule::Optimistic,
                         double tolerance = kIndifferenceTolerance);

enum class TradingClass { NoTrade, DayAheadAndRedispatch, DayAheadOnly, Indifferent };
std::string_view to_string(TradingClass c);

/// Band of u relative to the thresholds u_d <= u_r. Throws ValidationError
/// when u_d > u_r.
TradingClass classify(double u, double u_d, double u_r);

}  // namespace idgame
