#pragma once

#include "idgame/equilibrium.hpp"
#include "idgame/market_model.hpp"
#include "idgame/population.hpp"
#include "idgame/strategy.hpp"
#include "idgame/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace idgame {

/// One market slot (hour). Quantities in kWh, prices in $/kWh.
struct SlotConfig {
    std::size_t index = 0;
    double d0 = 80'000.0;
    double capacity = 120'000.0;
    SupplyCurve supply;
    double sigma = 10'000.0;
    std::optional<double> truncation = 6.0;
    Scenario scenario = Scenario::Anticipatory;
    IndifferenceRule rule = IndifferenceRule::Optimistic;
    std::size_t samples = 10'000;
    std::uint64_t seed = 1;
    int quadrature_nodes = 129;
    SolverOptions solver;

    void validate() const;
    UncertaintyModel uncertainty() const { return {sigma, truncation, d0, capacity}; }
};

/// Sample mean with its standard error.
struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Mean-field agent outcome at one utility level.
struct AgentCurvePoint {
    double utility = 0.0;
    double pr_trade_da = 0.0;
    double pr_trade_rd = 0.0;
    double welfare_per_kwh = 0.0;  ///< expected $ per kWh of e_max
    friend bool operator==(const AgentCurvePoint&, const AgentCurvePoint&) = default;
};

struct SlotReport {
    SlotConfig config;
    EquilibriumSolution solution;
    double da_flexible_demand = 0.0;  ///< phi(u_d), kWh
    Estimate utility;                 ///< $
    Estimate da_cost;                 ///< $, positive
    Estimate rd_revenue;              ///< $ paid to agents
    Estimate welfare;                 ///< utility - da_cost + rd_revenue
    Estimate dso_cost;                ///< equals rd_revenue
    Estimate pre_demand;              ///< d0 + D + phi(u_d), kWh
    Estimate post_demand;             ///< after redispatch, kWh
    Estimate congestion_probability;  ///< fraction of samples with Pi^r > 0
    Estimate deficit_probability;     ///< fraction ending above capacity
    std::vector<AgentCurvePoint> curves;
};

struct ScenarioRun {
    Scenario scenario = Scenario::Anticipatory;
    std::vector<SlotReport> slots;
};

/// Anticipatory minus naive, per slot.
struct SlotDelta {
    std::size_t slot = 0;
    double welfare = 0.0;
    double utility = 0.0;
    double da_cost = 0.0;
    double rd_revenue = 0.0;
    double da_demand = 0.0;  ///< d0 + phi(u_d) difference, kWh
};

struct HorizonReport {
    std::vector<ScenarioRun> runs;
    std::vector<SlotDelta> deltas;  ///< empty unless both scenarios ran

    const ScenarioRun* find(Scenario scenario) const;
};

/// Points on the per-agent utility grid.
inline constexpr std::size_t kCurvePoints = 200;

/// Equilibrium of one slot: solve_equilibrium or solve_naive for strictly
/// increasing supply, solve_fixed_price for flat supply or certain
/// congestion (cfg.rule picks the interval end).
EquilibriumSolution solve_slot(const SlotConfig& cfg, const PopulationSpec& population,
                               SolverTrace* trace = nullptr);

/// Solves the slot's equilibrium and averages the two-stage outcome over
/// cfg.samples draws of D. Model
/// errors are rethrown as SlotError carrying cfg.index.
SlotReport run_slot(const SlotConfig& cfg, const PopulationSpec& population);

/// Every (scenario, slot) pair run independently on up to `threads` workers.
/// The scenario field of each slot config is overridden. The result does not
/// depend on `threads`.
HorizonReport run_horizon(std::span<const SlotConfig> slots, const PopulationSpec& population,
                          std::span<const Scenario> scenarios, unsigned threads = 1);

struct ClearingResult {
    double pi_d = 0.0;
    std::vector<double> allocations;  ///< kWh, same order as the agents
};

/// Pay-as-cleared merit order: bids above pi_d fully accepted, below rejected,
/// at pi_d shared pro rata. Throws ValidationError on an empty population or a
/// bid/agent count mismatch.
ClearingResult clear_finite_population(std::span<const Agent> agents, std::span<const Bid> bids,
                                       double d0, const SupplyCurve& supply);

/// Largest expected welfare gain ($) any of n_probe random agents obtains by
/// switching from the scenario's bid to another (quantity, price) pair on a
/// grid, with pi_d and the redispatch distribution held fixed.
double deviation_check(const SlotReport& report, const PopulationSpec& population, std::size_t n_probe,
                       std::uint64_t seed);

}  // namespace idgame
