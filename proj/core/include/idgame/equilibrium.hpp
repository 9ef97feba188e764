#pragma once

#include "idgame/market_model.hpp"
#include "idgame/population.hpp"
#include "idgame/strategy.hpp"
#include "idgame/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace idgame {

/// Gauss-Legendre on the support of D, split at every kink of the integrand.
struct Quadrature {
    int nodes = 129;
};

/// Plain Monte Carlo over sample_inflexible(unc, seed, samples).
struct MonteCarlo {
    std::size_t samples = 100'000;
    std::uint64_t seed = 1;
};

using ExpectationMethod = std::variant<Quadrature, MonteCarlo>;

/// Moments of the congestion price tail above a threshold u.
struct CongestionTail {
    double excess = 0.0;            ///< E[[U^c - u]^+], $/kWh
    double probability = 0.0;       ///< Pr(U^c > u)
    double excess_std_error = 0.0;  ///< Monte Carlo standard error; 0 for quadrature
};

CongestionTail congestion_tail(double u, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                               const ExpectationMethod& method);

/// E_D[[phi^-1(c - d0 - D) - u_d]^+]. Throws ValidationError for a
/// non-positive node or sample count.
double expected_excess(double u_d, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                       const ExpectationMethod& method);

/// Anticipatory bid price E[max(u, Pi^r)] when the day-ahead threshold is
/// u_d, so Pi^r = U^c on {U^c > u_d} and 0 otherwise.
double bid_price(double u, double u_d, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                 const ExpectationMethod& method);

/// g(u) = bid_price(u | u) - f(d0 + phi(u)).
double gap(double u, const MeanFieldDemand& mf, const SupplyCurve& supply,
           const UncertaintyModel& unc, const ExpectationMethod& method);

/// Gap of the naive scenario: u - f(d0 + phi(u)).
double naive_gap(double u, const MeanFieldDemand& mf, const SupplyCurve& supply,
                 const UncertaintyModel& unc);

/// Distribution of Pi^r seen by agents when the day-ahead threshold is u_d.
/// Quadrature nodes (or Monte Carlo samples) become weighted atoms.
RedispatchDistribution redispatch_distribution(double u_d, const MeanFieldDemand& mf,
                                               const UncertaintyModel& unc,
                                               const ExpectationMethod& method);

enum class SolutionCase { AllTrade, NoneTrade, Interior, Interval };
std::string_view to_string(SolutionCase c);

struct EquilibriumSolution {
    double u_d = 0.0;
    double pi_d = 0.0;  ///< f(d0 + phi(u_d))
    SolutionCase kind = SolutionCase::Interior;
    double u_lower = 0.0;  ///< Interval only: pessimistic threshold
    double u_upper = 0.0;  ///< Interval only: optimistic threshold
    double residual = 0.0;
    double congestion_probability = 0.0;  ///< Pr(U^c > max(u_d, u_min))
    int iterations = 0;
};

struct SolverOptions {
    double tolerance = 1e-9;  ///< $/kWh, on |gap| (strict solvers) or bracket width (interval)
    int max_iterations = 200;
    double indifference_tolerance = kIndifferenceTolerance;
    /// Congestion counts as certain when Pr(U^c > u_min) > 1 - certainty_margin.
    double certainty_margin = 1e-12;
    /// Which end of an indifference interval becomes u_d.
    IndifferenceRule rule = IndifferenceRule::Optimistic;
};

struct BracketStep {
    int iteration = 0;
    double lower = 0.0;
    double upper = 0.0;
    double midpoint = 0.0;
    double gap = 0.0;
};

/// Bracket history of the last solve, for diagnostics output.
struct SolverTrace {
    std::vector<BracketStep> steps;
};

/// Unique equilibrium threshold for strictly increasing supply with
/// uncertain congestion. Throws AssumptionError when either precondition
/// fails (use solve_fixed_price) and ConvergenceError past max_iterations.
EquilibriumSolution solve_equilibrium(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                      const UncertaintyModel& unc, const ExpectationMethod& method,
                                      const SolverOptions& options = {}, SolverTrace* trace = nullptr);

/// Indifference interval [u_lower, u_upper] for supply curves with flat parts
/// or certain congestion: u_lower = inf{u : g(u) >= 0}, u_upper = inf{u :
/// g(u) > 0}, zero meaning within the indifference tolerance. `bids` picks the
/// anticipatory gap or the naive one. Falls back to AllTrade / NoneTrade when
/// g has no sign change.
EquilibriumSolution solve_fixed_price(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                      const UncertaintyModel& unc, const ExpectationMethod& method,
                                      const SolverOptions& options = {},
                                      Scenario bids = Scenario::Anticipatory,
                                      SolverTrace* trace = nullptr);

/// Threshold when agents bid their utility. Requires strictly increasing
/// supply (AssumptionError otherwise). `method` only feeds the reported
/// congestion probability.
EquilibriumSolution solve_naive(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                const UncertaintyModel& unc, const SolverOptions& options = {},
                                const ExpectationMethod& method = Quadrature{},
                                SolverTrace* trace = nullptr);

struct GapSample {
    double utility = 0.0;
    double gap = 0.0;
};

/// g on `points` evenly spaced utilities spanning [u_min, u_max].
std::vector<GapSample> gap_grid(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                const UncertaintyModel& unc, const ExpectationMethod& method,
                                std::size_t points, Scenario bids = Scenario::Anticipatory);

}  // namespace idgame
