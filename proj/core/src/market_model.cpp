#include "idgame/market_model.hpp"
#include "idgame/errors.hpp"
#include "idgame/numeric.hpp"

#include <cmath>
#include <limits>

namespace idgame {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kInflexibleStream = 0xD0D0;
constexpr double kUntruncatedSpan = 12.0;

void validate_curve(const PowerLaw& c) {
    if (!(c.scale > 0.0) || !(c.reference > 0.0) || !(c.exponent >= 1.0)) {
        throw ValidationError("power-law supply: need scale > 0, reference > 0, exponent >= 1");
    }
}

void validate_curve(const FixedPrice& c) {
    if (!(c.price >= 0.0) || !std::isfinite(c.price)) {
        throw ValidationError("fixed-price supply: price must be finite and >= 0");
    }
}

void validate_curve(const PiecewiseLinear& c) {
    if (c.knots.size() < 2) throw ValidationError("piecewise-linear supply: need at least two knots");
    if (c.knots.front().first < 0.0) {
        throw ValidationError("piecewise-linear supply: quantities must be >= 0");
    }
    for (std::size_t i = 1; i < c.knots.size(); ++i) {
        if (!(c.knots[i].first > c.knots[i - 1].first)) {
            throw ValidationError("piecewise-linear supply: quantities must be strictly increasing");
        }
        if (c.knots[i].second < c.knots[i - 1].second) {
            throw ValidationError("piecewise-linear supply: prices must be non-decreasing");
        }
    }
    if (c.knots.front().second < 0.0) {
        throw ValidationError("piecewise-linear supply: prices must be >= 0");
    }
}

double segment_price(const std::pair<double, double>& a, const std::pair<double, double>& b, double x) {
    const double t = (x - a.first) / (b.first - a.first);
    return a.second + t * (b.second - a.second);
}

}  // namespace

SupplyCurve::SupplyCurve(Variant curve) : curve_(std::move(curve)) {
    std::visit([](const auto& c) { validate_curve(c); }, curve_);
}

double SupplyCurve::price(double x) const {
    return std::visit(
        overloaded{
            [x](const PowerLaw& c) { return c.scale * std::pow(x / c.reference, c.exponent); },
            [](const FixedPrice& c) { return c.price; },
            [x](const PiecewiseLinear& c) {
                const auto& k = c.knots;
                if (x <= k.front().first) return std::max(0.0, segment_price(k[0], k[1], x));
                for (std::size_t i = 1; i < k.size(); ++i) {
                    if (x <= k[i].first) return segment_price(k[i - 1], k[i], x);
                }
                return segment_price(k[k.size() - 2], k.back(), x);
            },
        },
        curve_);
}

double SupplyCurve::quantity_at(double p) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (price(0.0) > p) return -1.0;
    return std::visit(
        overloaded{
            [p](const PowerLaw& c) { return c.reference * std::pow(p / c.scale, 1.0 / c.exponent); },
            [](const FixedPrice&) { return inf; },
            [p](const PiecewiseLinear& c) {
                const auto& k = c.knots;
                // Walk segments (with linear extensions) for the last x where f(x) <= p.
                const double last_slope = (k.back().second - k[k.size() - 2].second) /
                                          (k.back().first - k[k.size() - 2].first);
                if (p >= k.back().second) {
                    if (last_slope <= 0.0) return inf;
                    return k.back().first + (p - k.back().second) / last_slope;
                }
                for (std::size_t i = k.size() - 1; i-- > 0;) {
                    if (p >= k[i].second) {
                        const double dp = k[i + 1].second - k[i].second;
                        return k[i].first + (p - k[i].second) / dp * (k[i + 1].first - k[i].first);
                    }
                }
                // p is below the first knot price but f(0) <= p: inside the
                // extended first segment.
                const double dp = k[1].second - k[0].second;
                const double x = k[0].first + (p - k[0].second) / dp * (k[1].first - k[0].first);
                return std::max(0.0, x);
            },
        },
        curve_);
}

bool SupplyCurve::strictly_increasing() const {
    return std::visit(overloaded{
                          [](const PowerLaw&) { return true; },
                          [](const FixedPrice&) { return false; },
                          [](const PiecewiseLinear& c) {
                              for (std::size_t i = 1; i < c.knots.size(); ++i) {
                                  if (!(c.knots[i].second > c.knots[i - 1].second)) return false;
                              }
                              return true;
                          },
                      },
                      curve_);
}

std::string_view SupplyCurve::kind() const {
    return std::visit(overloaded{
                          [](const PowerLaw&) { return std::string_view("power_law"); },
                          [](const FixedPrice&) { return std::string_view("fixed_price"); },
                          [](const PiecewiseLinear&) { return std::string_view("piecewise_linear"); },
                      },
                      curve_);
}

double supply_price(const SupplyCurve& curve, double x) {
    if (!(x >= 0.0)) throw ValidationError("supply_price: demand must be >= 0");
    return curve.price(x);
}

void UncertaintyModel::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("uncertainty: sigma must be >= 0");
    if (truncation && !(*truncation > 0.0)) throw ValidationError("uncertainty: truncation must be > 0");
    if (!(capacity > 0.0) || !std::isfinite(capacity)) throw ValidationError("uncertainty: capacity must be > 0");
    if (!std::isfinite(d0)) throw ValidationError("uncertainty: d0 must be finite");
}

double UncertaintyModel::support_lower() const {
    return -support_upper();
}

double UncertaintyModel::support_upper() const {
    return sigma * truncation.value_or(kUntruncatedSpan);
}

std::string_view to_string(CongestionCase c) {
    switch (c) {
        case CongestionCase::Interior: return "interior";
        case CongestionCase::AlwaysCongested: return "always_congested";
        case CongestionCase::NeverCongested: return "never_congested";
    }
    return "unknown";
}

CongestionPrice congestion_price(const MeanFieldDemand& mf, const UncertaintyModel& unc,
                                 double d_realized) {
    const double q = unc.headroom(d_realized);
    if (q <= 0.0) return {mf.u_max(), CongestionCase::AlwaysCongested};
    if (q >= mf.total_demand()) return {mf.u_min(), CongestionCase::NeverCongested};
    return {mf.phi_inverse(q), CongestionCase::Interior};
}

double redispatch_price(const CongestionPrice& uc, double u_d) {
    if (!(u_d >= 0.0)) throw ValidationError("redispatch_price: u_d must be >= 0");
    return uc.value <= u_d ? 0.0 : uc.value;
}

double sample_inflexible_at(const UncertaintyModel& unc, std::uint64_t seed, std::uint64_t index) {
    if (unc.sigma == 0.0) return 0.0;
    const double k = unc.truncation.value_or(std::numeric_limits<double>::infinity());
    for (std::uint64_t attempt = 0;; ++attempt) {
        const double z = numeric::counter_normal(seed, kInflexibleStream + attempt, index);
        if (std::abs(z) <= k) return unc.sigma * z;
    }
}

std::vector<double> sample_inflexible(const UncertaintyModel& unc, std::uint64_t seed, std::size_t n) {
    if (n == 0) throw ValidationError("sample_inflexible: n must be >= 1");
    unc.validate();
    std::vector<double> draws(n);
    for (std::size_t j = 0; j < n; ++j) draws[j] = sample_inflexible_at(unc, seed, j);
    return draws;
}

}  // namespace idgame
