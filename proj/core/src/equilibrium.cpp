#include "idgame/equilibrium.hpp"
#include "idgame/errors.hpp"
#include "idgame/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace idgame {

namespace {

struct WeightedDraw {
    double d = 0.0;
    double weight = 0.0;
};

void validate_method(const ExpectationMethod& method) {
    if (const auto* q = std::get_if<Quadrature>(&method); q && q->nodes <= 0) {
        throw ValidationError("quadrature: node count must be positive");
    }
    if (const auto* m = std::get_if<MonteCarlo>(&method); m && m->samples == 0) {
        throw ValidationError("monte carlo: sample count must be positive");
    }
}

// Quadrature nodes over the support of D with normalized weights. The
// support is split where U^c(D) hits a clamp and where U^c(D) == split_at.
std::vector<WeightedDraw> quadrature_draws(double split_at, const MeanFieldDemand& mf,
                                           const UncertaintyModel& unc, int nodes) {
    if (unc.sigma == 0.0) return {{0.0, 1.0}};

    const double lo = unc.support_lower();
    const double hi = unc.support_upper();
    std::vector<double> cuts{lo, hi};
    auto add_cut = [&](double q) {
        const double d = unc.capacity - unc.d0 - q;
        if (d > lo && d < hi) cuts.push_back(d);
    };
    for (double q : mf.kink_quantities()) add_cut(q);
    if (split_at > mf.u_min() && split_at < mf.u_max()) add_cut(mf.phi(split_at));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto& rule = numeric::gauss_legendre(nodes);
    std::vector<WeightedDraw> draws;
    draws.reserve(rule.size() * (cuts.size() - 1));
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double half = 0.5 * (cuts[s + 1] - cuts[s]);
        const double mid = 0.5 * (cuts[s + 1] + cuts[s]);
        for (int i = 0; i < rule.size(); ++i) {
            const double d = mid + half * rule.nodes()[i];
            const double w = half * rule.weights()[i] * numeric::normal_pdf(d / unc.sigma);
            draws.push_back({d, w});
            total += w;
        }
    }
    for (auto& draw : draws) draw.weight /= total;
    return draws;
}

CongestionTail tail_from_quadrature(double u, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                                    int nodes) {
    CongestionTail out;
    for (const auto& draw : quadrature_draws(u, mf, unc, nodes)) {
        const double uc = congestion_price(mf, unc, draw.d).value;
        if (uc > u) {
            out.excess += draw.weight * (uc - u);
            out.probability += draw.weight;
        }
    }
    return out;
}

CongestionTail tail_from_samples(double u, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                                 const MonteCarlo& mc) {
    std::vector<double> excess(mc.samples);
    std::vector<double> hit(mc.samples);
    for (std::size_t j = 0; j < mc.samples; ++j) {
        const double uc = congestion_price(mf, unc, sample_inflexible_at(unc, mc.seed, j)).value;
        excess[j] = std::max(0.0, uc - u);
        hit[j] = uc > u ? 1.0 : 0.0;
    }
    const auto e = numeric::mean_and_error(excess);
    return {e.mean, numeric::pairwise_sum(hit) / static_cast<double>(mc.samples), e.std_error};
}

double effective_threshold(double u_d, const MeanFieldDemand& mf) {
    return std::max(u_d, mf.u_min());
}

// Bisection on a non-decreasing function with f(lo) < 0 < f(hi); stops once
// |f(mid)| < tolerance.
struct RootResult {
    double root = 0.0;
    double value = 0.0;
    int iterations = 0;
};

RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       const SolverOptions& options, SolverTrace* trace) {
    for (int it = 1; it <= options.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double value = f(mid);
        if (trace) trace->steps.push_back({it, lo, hi, mid, value});
        if (std::abs(value) < options.tolerance) return {mid, value, it};
        if (mid <= lo || mid >= hi) break;  // bracket exhausted at double precision
        (value < 0.0 ? lo : hi) = mid;
    }
    throw ConvergenceError("bisection did not reach the residual tolerance", lo, hi,
                           options.max_iterations);
}

// First u in [lo, hi] where a monotone predicate turns true, assuming
// pred(lo) false and pred(hi) true; returns the true end of the final bracket.
double bisect_predicate(const std::function<double(double)>& f, const std::function<bool(double)>& pred,
                        double lo, double hi, const SolverOptions& options, SolverTrace* trace,
                        int& iterations) {
    int it = 0;
    while (hi - lo > options.tolerance) {
        if (++it > options.max_iterations) {
            throw ConvergenceError("interval bisection exceeded max_iterations", lo, hi, it - 1);
        }
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double value = f(mid);
        if (trace) trace->steps.push_back({it, lo, hi, mid, value});
        (pred(mid) ? hi : lo) = mid;
    }
    iterations += it;
    return hi;
}

EquilibriumSolution finish(EquilibriumSolution sol, const MeanFieldDemand& mf, const SupplyCurve& supply,
                           const UncertaintyModel& unc, const ExpectationMethod& method) {
    sol.pi_d = supply.price(unc.d0 + mf.phi(sol.u_d));
    sol.congestion_probability =
        congestion_tail(effective_threshold(sol.u_d, mf), mf, unc, method).probability;
    return sol;
}

EquilibriumSolution boundary_solution(SolutionCase kind, const MeanFieldDemand& mf, double residual) {
    EquilibriumSolution sol;
    sol.kind = kind;
    sol.u_d = kind == SolutionCase::AllTrade ? 0.0 : mf.u_max();
    sol.u_lower = sol.u_upper = sol.u_d;
    sol.residual = residual;
    return sol;
}

EquilibriumSolution solve_strict(const std::function<double(double)>& g, const MeanFieldDemand& mf,
                                 const SolverOptions& options, SolverTrace* trace) {
    const double g_min = g(mf.u_min());
    if (g_min > 0.0) return boundary_solution(SolutionCase::AllTrade, mf, g_min);
    const double g_max = g(mf.u_max());
    if (g_max < 0.0) return boundary_solution(SolutionCase::NoneTrade, mf, g_max);

    EquilibriumSolution sol;
    sol.kind = SolutionCase::Interior;
    if (std::abs(g_min) < options.tolerance) {
        sol.u_d = mf.u_min();
        sol.residual = std::abs(g_min);
    } else if (std::abs(g_max) < options.tolerance) {
        sol.u_d = mf.u_max();
        sol.residual = std::abs(g_max);
    } else {
        const auto root = bisect_root(g, mf.u_min(), mf.u_max(), options, trace);
        sol.u_d = root.root;
        sol.residual = std::abs(root.value);
        sol.iterations = root.iterations;
    }
    sol.u_lower = sol.u_upper = sol.u_d;
    return sol;
}

}  // namespace

CongestionTail congestion_tail(double u, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                               const ExpectationMethod& method) {
    validate_method(method);
    if (const auto* q = std::get_if<Quadrature>(&method)) return tail_from_quadrature(u, mf, unc, q->nodes);
    return tail_from_samples(u, mf, unc, std::get<MonteCarlo>(method));
}

double expected_excess(double u_d, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                       const ExpectationMethod& method) {
    if (!std::isfinite(u_d)) throw ValidationError("expected_excess: u_d must be finite");
    return congestion_tail(u_d, mf, unc, method).excess;
}

double bid_price(double u, double u_d, const MeanFieldDemand& mf, const UncertaintyModel& unc,
                 const ExpectationMethod& method) {
    if (!(u >= 0.0)) throw ValidationError("bid_price: u must be >= 0");
    if (u >= u_d) return u + congestion_tail(u, mf, unc, method).excess;
    // Below the threshold the redispatch event is {U^c > u_d}; on it the
    // agent collects U^c, elsewhere it keeps u.
    const auto tail = congestion_tail(u_d, mf, unc, method);
    return u + tail.excess + (u_d - u) * tail.probability;
}

double gap(double u, const MeanFieldDemand& mf, const SupplyCurve& supply, const UncertaintyModel& unc,
           const ExpectationMethod& method) {
    return bid_price(u, u, mf, unc, method) - supply.price(unc.d0 + mf.phi(u));
}

double naive_gap(double u, const MeanFieldDemand& mf, const SupplyCurve& supply,
                 const UncertaintyModel& unc) {
    return u - supply.price(unc.d0 + mf.phi(u));
}

RedispatchDistribution redispatch_distribution(double u_d, const MeanFieldDemand& mf,
                                               const UncertaintyModel& unc,
                                               const ExpectationMethod& method) {
    validate_method(method);
    const double threshold = effective_threshold(u_d, mf);
    std::vector<PriceAtom> atoms;
    if (const auto* q = std::get_if<Quadrature>(&method)) {
        for (const auto& draw : quadrature_draws(threshold, mf, unc, q->nodes)) {
            atoms.push_back({redispatch_price(congestion_price(mf, unc, draw.d), threshold), draw.weight});
        }
    } else {
        const auto& mc = std::get<MonteCarlo>(method);
        atoms.reserve(mc.samples);
        for (std::size_t j = 0; j < mc.samples; ++j) {
            const auto uc = congestion_price(mf, unc, sample_inflexible_at(unc, mc.seed, j));
            atoms.push_back({redispatch_price(uc, threshold), 1.0});
        }
    }
    return RedispatchDistribution(std::move(atoms));
}

std::string_view to_string(SolutionCase c) {
    switch (c) {
        case SolutionCase::AllTrade: return "all_trade";
        case SolutionCase::NoneTrade: return "none_trade";
        case SolutionCase::Interior: return "interior";
        case SolutionCase::Interval: return "interval";
    }
    return "unknown";
}

EquilibriumSolution solve_equilibrium(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                      const UncertaintyModel& unc, const ExpectationMethod& method,
                                      const SolverOptions& options, SolverTrace* trace) {
    unc.validate();
    validate_method(method);
    if (!supply.strictly_increasing()) {
        throw AssumptionError("supply curve is not strictly increasing (" + std::string(supply.kind()) +
                              "); use solve_fixed_price");
    }
    const double certain = congestion_tail(mf.u_min(), mf, unc, method).probability;
    if (certain > 1.0 - options.certainty_margin) {
        throw AssumptionError("congestion is certain at u_min (Pr = 1); use solve_fixed_price");
    }
    auto g = [&](double u) { return gap(u, mf, supply, unc, method); };
    return finish(solve_strict(g, mf, options, trace), mf, supply, unc, method);
}

EquilibriumSolution solve_naive(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                const UncertaintyModel& unc, const SolverOptions& options,
                                const ExpectationMethod& method, SolverTrace* trace) {
    unc.validate();
    if (!supply.strictly_increasing()) {
        throw AssumptionError("supply curve is not strictly increasing (" + std::string(supply.kind()) +
                              "); use solve_fixed_price with naive bids");
    }
    auto g = [&](double u) { return naive_gap(u, mf, supply, unc); };
    return finish(solve_strict(g, mf, options, trace), mf, supply, unc, method);
}

EquilibriumSolution solve_fixed_price(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                      const UncertaintyModel& unc, const ExpectationMethod& method,
                                      const SolverOptions& options, Scenario bids, SolverTrace* trace) {
    unc.validate();
    validate_method(method);
    std::function<double(double)> g;
    if (bids == Scenario::Anticipatory) {
        g = [&](double u) { return gap(u, mf, supply, unc, method); };
    } else {
        g = [&](double u) { return naive_gap(u, mf, supply, unc); };
    }
    const double eps = options.indifference_tolerance;

    const double g_min = g(mf.u_min());
    if (g_min > eps) return finish(boundary_solution(SolutionCase::AllTrade, mf, g_min), mf, supply, unc, method);
    const double g_max = g(mf.u_max());
    if (g_max < -eps) return finish(boundary_solution(SolutionCase::NoneTrade, mf, g_max), mf, supply, unc, method);

    EquilibriumSolution sol;
    sol.kind = SolutionCase::Interval;
    auto non_negative = [&](double u) { return g(u) >= -eps; };
    auto positive = [&](double u) { return g(u) > eps; };

    sol.u_lower = g_min >= -eps ? mf.u_min()
                                : bisect_predicate(g, non_negative, mf.u_min(), mf.u_max(), options, trace,
                                                   sol.iterations);
    sol.u_upper = g_max <= eps ? mf.u_max()
                               : bisect_predicate(g, positive, mf.u_min(), mf.u_max(), options, trace,
                                                  sol.iterations);
    sol.u_upper = std::max(sol.u_upper, sol.u_lower);
    sol.u_d = options.rule == IndifferenceRule::Pessimistic ? sol.u_lower : sol.u_upper;
    sol.residual = std::abs(g(sol.u_d));
    return finish(sol, mf, supply, unc, method);
}

std::vector<GapSample> gap_grid(const MeanFieldDemand& mf, const SupplyCurve& supply,
                                const UncertaintyModel& unc, const ExpectationMethod& method,
                                std::size_t points, Scenario bids) {
    if (points < 2) throw ValidationError("gap_grid: need at least two points");
    std::vector<GapSample> grid(points);
    const double step = (mf.u_max() - mf.u_min()) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double u = i + 1 == points ? mf.u_max() : mf.u_min() + step * static_cast<double>(i);
        grid[i] = {u, bids == Scenario::Anticipatory ? gap(u, mf, supply, unc, method)
                                                     : naive_gap(u, mf, supply, unc)};
    }
    return grid;
}

}  // namespace idgame
