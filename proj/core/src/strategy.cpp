#include "idgame/strategy.hpp"
#include "idgame/errors.hpp"

#include <cmath>
#include <utility>

namespace idgame {

RedispatchDistribution::RedispatchDistribution(std::vector<PriceAtom> atoms)
    : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ValidationError("redispatch distribution: no atoms");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.weight >= 0.0) || !(a.price >= 0.0) || !std::isfinite(a.price)) {
            throw ValidationError("redispatch distribution: need price >= 0 and weight >= 0");
        }
        total += a.weight;
    }
    if (!(total > 0.0)) throw ValidationError("redispatch distribution: weights sum to zero");
    for (auto& a : atoms_) a.weight /= total;
}

double RedispatchDistribution::expected_upside(double u) const {
    double acc = 0.0;
    for (const auto& a : atoms_) {
        if (a.price > u) acc += a.weight * (a.price - u);
    }
    return acc;
}

double RedispatchDistribution::probability_above(double u) const {
    double acc = 0.0;
    for (const auto& a : atoms_) {
        if (a.price > u) acc += a.weight;
    }
    return acc;
}

SecondStageDecision optimal_second_stage(double e_d, double pi_r, double u) {
    if (!(e_d >= 0.0)) throw ValidationError("optimal_second_stage: e_d must be >= 0");
    if (pi_r > u) return {e_d, false};
    if (pi_r < u) return {0.0, false};
    return {0.0, true};
}

double welfare_factor(double u, double pi_d, const RedispatchDistribution& redispatch) {
    return u - pi_d + redispatch.expected_upside(u);
}

double expected_welfare(double e_d, double pi_d, double u, const RedispatchDistribution& redispatch) {
    if (!(e_d >= 0.0)) throw ValidationError("expected_welfare: e_d must be >= 0");
    if (e_d == 0.0) return 0.0;
    return e_d * welfare_factor(u, pi_d, redispatch);
}

DayAheadDecision optimal_day_ahead(double u, double e_max, double pi_d,
                                   const RedispatchDistribution& redispatch, IndifferenceRule rule,
                                   double tolerance) {
    if (!(e_max >= 0.0)) throw ValidationError("optimal_day_ahead: e_max must be >= 0");
    const double g = welfare_factor(u, pi_d, redispatch);
    if (std::abs(g) <= tolerance) {
        return {rule == IndifferenceRule::Pessimistic ? e_max : 0.0, true};
    }
    return {g > 0.0 ? e_max : 0.0, false};
}

Bid optimal_bid(double u, double e_max, const RedispatchDistribution& redispatch) {
    if (!(e_max >= 0.0)) throw ValidationError("optimal_bid: e_max must be >= 0");
    return {e_max, redispatch.expected_max(u)};
}

double accepted_quantity(const Bid& bid, double pi_d, IndifferenceRule rule, double tolerance) {
    const double margin = bid.price - pi_d;
    if (std::abs(margin) <= tolerance) {
        return rule == IndifferenceRule::Pessimistic ? bid.quantity : 0.0;
    }
    return margin > 0.0 ? bid.quantity : 0.0;
}

std::string_view to_string(TradingClass c) {
    switch (c) {
        case TradingClass::NoTrade: return "no_trade";
        case TradingClass::DayAheadAndRedispatch: return "day_ahead_and_redispatch";
        case TradingClass::DayAheadOnly: return "day_ahead_only";
        case TradingClass::Indifferent: return "indifferent";
    }
    return "unknown";
}

TradingClass classify(double u, double u_d, double u_r) {
    if (u_d > u_r) throw ValidationError("classify: thresholds out of order (u_d > u_r)");
    if (u == u_d || u == u_r) return TradingClass::Indifferent;
    if (u < u_d) return TradingClass::NoTrade;
    if (u < u_r) return TradingClass::DayAheadAndRedispatch;
    return TradingClass::DayAheadOnly;
}

}  // namespace idgame
