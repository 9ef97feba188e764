#include "idgame/numeric.hpp"
#include "idgame/errors.hpp"
#include "idgame/types.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace idgame {

std::string_view to_string(IndifferenceRule rule) {
    return rule == IndifferenceRule::Optimistic ? "optimistic" : "pessimistic";
}

std::string_view to_string(Scenario scenario) {
    return scenario == Scenario::Anticipatory ? "anticipatory" : "naive";
}

}  // namespace idgame

namespace idgame::numeric {

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 16;
    if (values.size() <= kLeaf) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanEstimate mean_and_error(std::span<const double> values) {
    MeanEstimate out;
    if (values.empty()) return out;
    const double n = static_cast<double>(values.size());
    out.mean = pairwise_sum(values) / n;
    if (values.size() < 2) return out;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - out.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    out.std_error = std::sqrt(var / n);
    return out;
}

GaussLegendreRule::GaussLegendreRule(int points) {
    if (points < 1) throw ValidationError("Gauss-Legendre rule needs at least one node");
    const int n = points;
    nodes_.assign(n, 0.0);
    weights_.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

const GaussLegendreRule& gauss_legendre(int points) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[points];
    if (!slot) slot = std::make_unique<const GaussLegendreRule>(points);
    return *slot;
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix64(mix64(mix64(seed) ^ stream) + index);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(counter_hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const double u1 = 1.0 - counter_uniform(seed, 2 * stream, index);  // (0, 1]
    const double u2 = counter_uniform(seed, 2 * stream + 1, index);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace idgame::numeric
