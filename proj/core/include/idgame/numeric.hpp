#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace idgame::numeric {

/// Sum with a fixed binary-tree association order. The result depends only
/// on the values and their order, never on how the work was scheduled.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error of the mean (sample standard deviation / sqrt(n)).
struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};
MeanEstimate mean_and_error(std::span<const double> values);

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendreRule {
public:
    explicit GaussLegendreRule(int points);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Integral of f over [a, b].
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            acc += weights_[i] * f(mid + half * nodes_[i]);
        }
        return half * acc;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Shared immutable rule for `points` nodes; safe to call from many threads.
const GaussLegendreRule& gauss_legendre(int points);

double normal_pdf(double z);
double normal_cdf(double z);

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, index), so any evaluation order gives the same values.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
/// Uniform on [0, 1) with 53 random bits.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
/// Standard normal via Box-Muller on two counter uniforms.
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace idgame::numeric
