#pragma once

#include "idgame/equilibrium.hpp"
#include "idgame/market_model.hpp"
#include "idgame/population.hpp"
#include "idgame/simulator.hpp"
#include "idgame/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace idgame {

enum class OutputFormat { Csv, Structured };

/// Everything one CLI run needs. Defaults reproduce the base experiment:
/// 10^4 agents, power-law supply, 24-slot synthetic profile, medium capacity.
struct RunConfig {
    PopulationSpec population;
    std::uint64_t population_seed = 1;
    SupplyCurve supply;
    std::vector<double> d0_profile;  ///< kWh per slot
    std::vector<double> capacity;    ///< kWh; one value for all slots or one per slot
    double sigma = 10'000.0;
    std::optional<double> truncation = 6.0;
    SolverOptions solver;
    int quadrature_nodes = 129;
    std::vector<Scenario> scenarios{Scenario::Anticipatory, Scenario::Naive};
    std::size_t samples = 10'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::filesystem::path output_dir = "out";
    OutputFormat format = OutputFormat::Csv;
    bool diagnostics = false;
    std::size_t solve_slot = 0;

    RunConfig();

    double capacity_at(std::size_t slot) const;
    /// One SlotConfig per profile entry, each with its own derived seed.
    std::vector<SlotConfig> slot_configs() const;
};

/// Synthetic 24-slot inflexible load (kWh): night peak, midday trough.
std::vector<double> default_d0_profile();

/// Seed of slot t, derived from the run seed by a counter hash.
std::uint64_t slot_seed(std::uint64_t run_seed, std::size_t slot);

/// Parses and validates JSON config text. Unknown keys are rejected. Throws
/// ConfigError whose where() is "line:column" for syntax errors and a JSON
/// pointer for schema errors.
RunConfig parse_config(std::string_view text);

/// Reads then parses a file. Throws IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

Scenario parse_scenario(std::string_view name);
IndifferenceRule parse_rule(std::string_view name);
OutputFormat parse_format(std::string_view name);

}  // namespace idgame
