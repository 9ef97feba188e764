#include "idgame/population.hpp"
#include "idgame/errors.hpp"
#include "idgame/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace idgame {

namespace {

constexpr std::uint64_t kUtilityStream = 0xA11CE;
constexpr std::uint64_t kEmaxStream = 0xB0B;

}  // namespace

void PopulationSpec::validate() const {
    if (agent_count == 0) throw ValidationError("population: agent_count must be positive");
    if (!(utility_min > 0.0 && utility_min < utility_max) || !std::isfinite(utility_max)) {
        throw ValidationError("population: need 0 < utility_min < utility_max");
    }
    if (!(emax_min > 0.0 && emax_min <= emax_max) || !std::isfinite(emax_max)) {
        throw ValidationError("population: need 0 < emax_min <= emax_max");
    }
}

MeanFieldDemand MeanFieldDemand::uniform(double total_demand, double u_min, double u_max) {
    if (!(total_demand > 0.0) || !(u_min >= 0.0 && u_min < u_max)) {
        throw ValidationError("mean field: need total_demand > 0 and 0 <= u_min < u_max");
    }
    return MeanFieldDemand(total_demand, u_min, u_max, Uniform{});
}

MeanFieldDemand MeanFieldDemand::empirical(std::span<const Agent> agents) {
    if (agents.empty()) throw ValidationError("mean field: empty agent list");
    std::vector<Agent> sorted(agents.begin(), agents.end());
    for (const auto& a : sorted) {
        if (!(a.utility > 0.0) || !(a.e_max > 0.0)) {
            throw ValidationError("mean field: agents need utility > 0 and e_max > 0");
        }
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Agent& a, const Agent& b) { return a.utility < b.utility; });

    Steps steps;
    for (const auto& a : sorted) {
        if (!steps.utilities.empty() && steps.utilities.back() == a.utility) {
            steps.tail_demand.back() += a.e_max;
            steps.tail_utility.back() += a.utility * a.e_max;
        } else {
            steps.utilities.push_back(a.utility);
            steps.tail_demand.push_back(a.e_max);
            steps.tail_utility.push_back(a.utility * a.e_max);
        }
    }
    // Per-level amounts to suffix sums.
    for (std::size_t j = steps.utilities.size() - 1; j-- > 0;) {
        steps.tail_demand[j] += steps.tail_demand[j + 1];
        steps.tail_utility[j] += steps.tail_utility[j + 1];
    }
    const double total = steps.tail_demand.front();
    const double lo = steps.utilities.front();
    const double hi = steps.utilities.back();
    return MeanFieldDemand(total, lo, hi, std::move(steps));
}

double MeanFieldDemand::phi(double u) const {
    if (const auto* s = std::get_if<Steps>(&repr_)) {
        const auto it = std::lower_bound(s->utilities.begin(), s->utilities.end(), u);
        if (it == s->utilities.end()) return 0.0;
        return s->tail_demand[static_cast<std::size_t>(it - s->utilities.begin())];
    }
    if (u <= u_min_) return total_;
    if (u >= u_max_) return 0.0;
    return total_ * (u_max_ - u) / (u_max_ - u_min_);
}

double MeanFieldDemand::phi_inverse(double q) const {
    if (q <= 0.0) return u_max_;
    if (q >= total_) return u_min_;
    if (const auto* s = std::get_if<Steps>(&repr_)) {
        // tail_demand is non-increasing; first index whose tail fits within q.
        const auto it = std::lower_bound(s->tail_demand.begin(), s->tail_demand.end(), q,
                                         [](double tail, double value) { return tail > value; });
        if (it == s->tail_demand.end()) return u_max_;
        return s->utilities[static_cast<std::size_t>(it - s->tail_demand.begin())];
    }
    return u_max_ - q * (u_max_ - u_min_) / total_;
}

double MeanFieldDemand::density(double u) const {
    if (is_empirical()) return 0.0;
    if (u < u_min_ || u > u_max_) return 0.0;
    return total_ / (u_max_ - u_min_);
}

double MeanFieldDemand::utility_mass(double u) const {
    if (const auto* s = std::get_if<Steps>(&repr_)) {
        const auto it = std::lower_bound(s->utilities.begin(), s->utilities.end(), u);
        if (it == s->utilities.end()) return 0.0;
        return s->tail_utility[static_cast<std::size_t>(it - s->utilities.begin())];
    }
    const double a = std::clamp(u, u_min_, u_max_);
    return total_ * (u_max_ * u_max_ - a * a) / (2.0 * (u_max_ - u_min_));
}

std::vector<Agent> sample_agents(const PopulationSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::vector<Agent> agents(spec.agent_count);
    const double du = spec.utility_max - spec.utility_min;
    const double de = spec.emax_max - spec.emax_min;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i].utility = spec.utility_min + du * numeric::counter_uniform(seed, kUtilityStream, i);
        agents[i].e_max = spec.emax_min + de * numeric::counter_uniform(seed, kEmaxStream, i);
    }
    return agents;
}

MeanFieldDemand mean_field_from_spec(const PopulationSpec& spec) {
    spec.validate();
    const double total = static_cast<double>(spec.agent_count) * spec.mean_emax();
    return MeanFieldDemand::uniform(total, spec.utility_min, spec.utility_max);
}

MeanFieldDemand mean_field_from_agents(std::span<const Agent> agents) {
    return MeanFieldDemand::empirical(agents);
}

void write_phi_csv(std::ostream& out, const MeanFieldDemand& mf, std::size_t points) {
    if (points < 2) throw ValidationError("phi csv: need at least two points");
    out << "utility,phi_kwh\n";
    const double step = (mf.u_max() - mf.u_min()) / static_cast<double>(points - 1);
    char buf[64];
    for (std::size_t i = 0; i < points; ++i) {
        const double u = mf.u_min() + step * static_cast<double>(i);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u, mf.phi(u));
        out << buf;
    }
}

}  // namespace idgame
