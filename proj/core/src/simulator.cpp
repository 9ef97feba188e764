#include "idgame/simulator.hpp"
#include "idgame/errors.hpp"
#include "idgame/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace idgame {

namespace {

Estimate estimate(std::span<const double> values) {
    const auto e = numeric::mean_and_error(values);
    return {e.mean, e.std_error};
}

bool trades_day_ahead(double u, double u_d, IndifferenceRule rule) {
    return u > u_d || (rule == IndifferenceRule::Pessimistic && u == u_d);
}

std::vector<AgentCurvePoint> agent_curves(const MeanFieldDemand& mf, const EquilibriumSolution& sol,
                                          IndifferenceRule rule, std::span<const double> pi_r) {
    std::vector<AgentCurvePoint> curves(kCurvePoints);
    std::vector<double> upside(pi_r.size());
    std::vector<double> hit(pi_r.size());
    const double step = (mf.u_max() - mf.u_min()) / static_cast<double>(kCurvePoints - 1);
    const double n = static_cast<double>(pi_r.size());
    for (std::size_t i = 0; i < kCurvePoints; ++i) {
        auto& point = curves[i];
        point.utility = i + 1 == kCurvePoints ? mf.u_max() : mf.u_min() + step * static_cast<double>(i);
        if (!trades_day_ahead(point.utility, sol.u_d, rule)) continue;
        for (std::size_t j = 0; j < pi_r.size(); ++j) {
            upside[j] = std::max(0.0, pi_r[j] - point.utility);
            hit[j] = pi_r[j] > point.utility ? 1.0 : 0.0;
        }
        point.pr_trade_da = 1.0;
        point.pr_trade_rd = numeric::pairwise_sum(hit) / n;
        point.welfare_per_kwh = point.utility - sol.pi_d + numeric::pairwise_sum(upside) / n;
    }
    return curves;
}

SlotReport run_slot_unchecked(const SlotConfig& cfg, const PopulationSpec& population) {
    cfg.validate();
    population.validate();
    const auto mf = mean_field_from_spec(population);
    const auto unc = cfg.uncertainty();

    SlotReport report;
    report.config = cfg;
    report.solution = solve_slot(cfg, population);
    const auto& sol = report.solution;
    const double u_eff = std::max(sol.u_d, mf.u_min());
    const double scheduled = mf.phi(sol.u_d);
    const double da_cost = sol.pi_d * scheduled;
    report.da_flexible_demand = scheduled;

    const std::size_t n = cfg.samples;
    std::vector<double> utility(n), revenue(n), welfare(n), pre(n), post(n), congested(n), deficit(n),
        pi_r(n);
    const double tolerance = 1e-6 * cfg.capacity;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = sample_inflexible_at(unc, cfg.seed, j);
        const double uc = congestion_price(mf, unc, d).value;
        pre[j] = cfg.d0 + d + scheduled;
        if (uc > u_eff) {
            pi_r[j] = uc;
            utility[j] = mf.utility_mass(uc);
            revenue[j] = uc * (scheduled - mf.phi(uc));
            post[j] = cfg.d0 + d + mf.phi(uc);
            congested[j] = 1.0;
        } else {
            pi_r[j] = 0.0;
            utility[j] = mf.utility_mass(sol.u_d);
            revenue[j] = 0.0;
            post[j] = pre[j];
            congested[j] = 0.0;
        }
        deficit[j] = post[j] > cfg.capacity + tolerance ? 1.0 : 0.0;
        welfare[j] = utility[j] - da_cost + revenue[j];
    }

    report.utility = estimate(utility);
    report.da_cost = {da_cost, 0.0};
    report.rd_revenue = estimate(revenue);
    report.welfare = {report.utility.mean - da_cost + report.rd_revenue.mean, estimate(welfare).se};
    report.dso_cost = report.rd_revenue;
    report.pre_demand = estimate(pre);
    report.post_demand = estimate(post);
    report.congestion_probability = estimate(congested);
    report.deficit_probability = estimate(deficit);
    report.curves = agent_curves(mf, sol, cfg.rule, pi_r);
    return report;
}

double total_da_demand(const SlotReport& r) { return r.config.d0 + r.da_flexible_demand; }

}  // namespace

void SlotConfig::validate() const {
    uncertainty().validate();
    if (!(d0 >= 0.0)) throw ValidationError("slot: d0 must be >= 0");
    if (!(capacity > 0.0)) throw ValidationError("slot: capacity must be positive");
    if (samples == 0) throw ValidationError("slot: sample count must be >= 1");
    if (quadrature_nodes <= 0) throw ValidationError("slot: quadrature node count must be positive");
}

const ScenarioRun* HorizonReport::find(Scenario scenario) const {
    for (const auto& run : runs) {
        if (run.scenario == scenario) return &run;
    }
    return nullptr;
}

EquilibriumSolution solve_slot(const SlotConfig& cfg, const PopulationSpec& population, SolverTrace* trace) {
    cfg.validate();
    const auto mf = mean_field_from_spec(population);
    const auto unc = cfg.uncertainty();
    const ExpectationMethod method = Quadrature{cfg.quadrature_nodes};
    SolverOptions options = cfg.solver;
    options.rule = cfg.rule;
    if (!cfg.supply.strictly_increasing()) {
        return solve_fixed_price(mf, cfg.supply, unc, method, options, cfg.scenario, trace);
    }
    if (cfg.scenario == Scenario::Naive) return solve_naive(mf, cfg.supply, unc, options, method, trace);
    try {
        return solve_equilibrium(mf, cfg.supply, unc, method, options, trace);
    } catch (const AssumptionError&) {
        if (trace) trace->steps.clear();
        return solve_fixed_price(mf, cfg.supply, unc, method, options, cfg.scenario, trace);
    }
}

SlotReport run_slot(const SlotConfig& cfg, const PopulationSpec& population) {
    try {
        return run_slot_unchecked(cfg, population);
    } catch (const SlotError&) {
        throw;
    } catch (const Error& e) {
        throw SlotError(cfg.index, e.what());
    }
}

HorizonReport run_horizon(std::span<const SlotConfig> slots, const PopulationSpec& population,
                          std::span<const Scenario> scenarios, unsigned threads) {
    if (slots.empty()) throw ValidationError("run_horizon: no slots");
    if (scenarios.empty()) throw ValidationError("run_horizon: no scenarios");

    const std::size_t tasks = slots.size() * scenarios.size();
    std::vector<SlotReport> results(tasks);
    std::vector<std::exception_ptr> errors(tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            SlotConfig cfg = slots[t % slots.size()];
            cfg.scenario = scenarios[t / slots.size()];
            try {
                results[t] = run_slot(cfg, population);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    HorizonReport report;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        ScenarioRun run{scenarios[s], {}};
        run.slots.assign(std::make_move_iterator(results.begin() + s * slots.size()),
                         std::make_move_iterator(results.begin() + (s + 1) * slots.size()));
        report.runs.push_back(std::move(run));
    }
    const auto* a = report.find(Scenario::Anticipatory);
    const auto* n = report.find(Scenario::Naive);
    if (a && n) {
        for (std::size_t t = 0; t < slots.size(); ++t) {
            const auto& x = a->slots[t];
            const auto& y = n->slots[t];
            report.deltas.push_back({x.config.index, x.welfare.mean - y.welfare.mean,
                                     x.utility.mean - y.utility.mean, x.da_cost.mean - y.da_cost.mean,
                                     x.rd_revenue.mean - y.rd_revenue.mean,
                                     total_da_demand(x) - total_da_demand(y)});
        }
    }
    return report;
}

ClearingResult clear_finite_population(std::span<const Agent> agents, std::span<const Bid> bids, double d0,
                                       const SupplyCurve& supply) {
    if (agents.empty()) throw ValidationError("clear_finite_population: empty population");
    if (agents.size() != bids.size()) {
        throw ValidationError("clear_finite_population: need exactly one bid per agent");
    }
    std::vector<std::size_t> order(bids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return bids[a].price > bids[b].price; });

    ClearingResult out;
    out.allocations.assign(bids.size(), 0.0);
    double accepted = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double price = bids[order[i]].price;
        std::size_t end = i;
        double group = 0.0;
        while (end < order.size() && bids[order[end]].price == price) group += bids[order[end++]].quantity;

        const double before = supply.price(d0 + accepted);
        if (before >= price) {
            out.pi_d = before;
            return out;
        }
        if (supply.price(d0 + accepted + group) <= price) {
            for (std::size_t k = i; k < end; ++k) out.allocations[order[k]] = bids[order[k]].quantity;
            accepted += group;
            i = end;
            continue;
        }
        // The supply curve crosses inside this price level: share pro rata.
        const double share = (supply.quantity_at(price) - d0 - accepted) / group;
        for (std::size_t k = i; k < end; ++k) out.allocations[order[k]] = share * bids[order[k]].quantity;
        out.pi_d = price;
        return out;
    }
    out.pi_d = supply.price(d0 + accepted);
    return out;
}

double deviation_check(const SlotReport& report, const PopulationSpec& population, std::size_t n_probe,
                       std::uint64_t seed) {
    const auto& cfg = report.config;
    const auto mf = mean_field_from_spec(population);
    const auto dist = redispatch_distribution(report.solution.u_d, mf, cfg.uncertainty(),
                                              Quadrature{cfg.quadrature_nodes});
    const double pi_d = report.solution.pi_d;
    const double tol = cfg.solver.indifference_tolerance;

    auto welfare = [&](const Bid& bid, double u) {
        const double e_d = accepted_quantity(bid, pi_d, cfg.rule, tol);
        return expected_welfare(e_d, pi_d, u, dist);
    };

    constexpr int kPriceSteps = 60;
    constexpr int kQuantitySteps = 8;
    const double price_top = 2.0 * mf.u_max();
    double best = 0.0;
    for (std::size_t i = 0; i < n_probe; ++i) {
        // Stratified utilities so every part of [u_min, u_max] gets a probe.
        const double strat = (static_cast<double>(i) + numeric::counter_uniform(seed, 0x9E0B, i)) /
                             static_cast<double>(n_probe);
        const double u = population.utility_min + strat * (population.utility_max - population.utility_min);
        const double e_max = population.emax_min +
                             numeric::counter_uniform(seed, 0x9E0C, i) * (population.emax_max - population.emax_min);
        const Bid own = cfg.scenario == Scenario::Anticipatory ? optimal_bid(u, e_max, dist) : Bid{e_max, u};
        const double base = welfare(own, u);
        for (int q = 0; q <= kQuantitySteps; ++q) {
            const double quantity = e_max * q / kQuantitySteps;
            for (int p = 0; p <= kPriceSteps; ++p) {
                const double price = price_top * p / kPriceSteps;
                best = std::max(best, welfare({quantity, price}, u) - base);
            }
            best = std::max(best, welfare({quantity, own.price}, u) - base);
        }
    }
    return best;
}

}  // namespace idgame
