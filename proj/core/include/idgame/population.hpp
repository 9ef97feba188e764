#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace idgame {

/// One flexible consumer: utility in $/kWh, maximum consumption in kWh.
struct Agent {
    double utility = 0.0;
    double e_max = 0.0;

    friend bool operator==(const Agent&, const Agent&) = default;
};

/// Finite population with utility and e_max drawn independently and
/// uniformly on their intervals.
struct PopulationSpec {
    std::size_t agent_count = 10'000;
    double utility_min = 0.01;
    double utility_max = 0.3;
    double emax_min = 3.0;
    double emax_max = 10.0;

    /// Throws ValidationError unless 0 < utility_min < utility_max,
    /// 0 < emax_min <= emax_max and agent_count > 0.
    void validate() const;
    double mean_emax() const noexcept { return 0.5 * (emax_min + emax_max); }
};

/// Mean-field demand: the density eta(u) of flexible day-ahead demand over
/// utility and its tail integral phi(u) = total demand of agents with
/// utility >= u.
///
/// Two representations exist. The uniform closed form is exact and strictly
/// decreasing on [u_min, u_max]; it is what the solvers consume. The
/// empirical step curve built from a finite agent list is only an oracle for
/// finite-N comparisons.
class MeanFieldDemand {
public:
    /// phi(u) = total * (u_max - clamp(u)) / (u_max - u_min).
    static MeanFieldDemand uniform(double total_demand, double u_min, double u_max);
    /// phi(u) = sum of e_max over agents with utility >= u.
    static MeanFieldDemand empirical(std::span<const Agent> agents);

    double phi(double u) const;
    /// Clamped inverse: u_max for q <= 0, u_min for q >= total_demand.
    /// Empirical form: the smallest agent utility whose tail demand fits
    /// within q.
    double phi_inverse(double q) const;
    /// eta(u); zero outside [u_min, u_max]. The empirical form has no density
    /// and returns 0.
    double density(double u) const;
    /// Integral of w * eta(w) over w >= u, i.e. $ of utility consumed by the
    /// agents at or above u.
    double utility_mass(double u) const;

    double u_min() const noexcept { return u_min_; }
    double u_max() const noexcept { return u_max_; }
    double total_demand() const noexcept { return total_; }
    bool is_empirical() const noexcept { return std::holds_alternative<Steps>(repr_); }

    /// Quantities q where phi_inverse(q) has a kink (the clamp edges).
    std::vector<double> kink_quantities() const { return {0.0, total_}; }

private:
    struct Uniform {};
    struct Steps {
        std::vector<double> utilities;      // ascending, unique
        std::vector<double> tail_demand;    // sum of e_max over utilities[j..]
        std::vector<double> tail_utility;   // sum of u * e_max over utilities[j..]
    };

    MeanFieldDemand(double total, double u_min, double u_max, std::variant<Uniform, Steps> repr)
        : total_(total), u_min_(u_min), u_max_(u_max), repr_(std::move(repr)) {}

    double total_;
    double u_min_;
    double u_max_;
    std::variant<Uniform, Steps> repr_;
};

/// Draws agent_count agents. Deterministic for a fixed seed.
std::vector<Agent> sample_agents(const PopulationSpec& spec, std::uint64_t seed);

/// Exact closed form: total demand = agent_count * E[e_max], uniform utilities.
MeanFieldDemand mean_field_from_spec(const PopulationSpec& spec);

/// Empirical step curve. Throws ValidationError on an empty list.
MeanFieldDemand mean_field_from_agents(std::span<const Agent> agents);

inline double phi_inverse(const MeanFieldDemand& mf, double q) { return mf.phi_inverse(q); }

/// Two-column CSV (utility,phi_kwh) on `points` evenly spaced utilities
/// spanning [u_min, u_max].
void write_phi_csv(std::ostream& out, const MeanFieldDemand& mf, std::size_t points = 200);

}  // namespace idgame
