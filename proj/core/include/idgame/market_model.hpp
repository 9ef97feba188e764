#pragma once

#include "idgame/population.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace idgame {

/// f(x) = scale * (x / reference)^exponent, x in kWh, result in $/kWh.
struct PowerLaw {
    double scale = 0.15;
    double reference = 1.2e5;
    double exponent = 1.5;
};

/// f(x) = price for every x.
struct FixedPrice {
    double price = 0.0;
};

/// Linear interpolation between (quantity kWh, price $/kWh) knots; the first
/// and last segments are extended linearly.
struct PiecewiseLinear {
    std::vector<std::pair<double, double>> knots;
};

/// Day-ahead supply function f^d(x): total demand (kWh) to clearing price.
class SupplyCurve {
public:
    using Variant = std::variant<PowerLaw, FixedPrice, PiecewiseLinear>;

    SupplyCurve() : SupplyCurve(PowerLaw{}) {}
    /// Validates the variant's invariants; throws ValidationError.
    explicit SupplyCurve(Variant curve);

    static SupplyCurve power_law(double scale, double reference, double exponent) {
        return SupplyCurve(PowerLaw{scale, reference, exponent});
    }
    static SupplyCurve fixed(double price) { return SupplyCurve(FixedPrice{price}); }

    double price(double x) const;
    /// sup{x >= 0 : f(x) <= p}; +infinity when f never exceeds p, and -1 when
    /// f(0) > p.
    double quantity_at(double p) const;
    /// True for PowerLaw and for PiecewiseLinear with every slope positive.
    bool strictly_increasing() const;
    bool is_fixed_price() const noexcept { return std::holds_alternative<FixedPrice>(curve_); }
    std::string_view kind() const;

    const Variant& variant() const noexcept { return curve_; }

private:
    Variant curve_;
};

/// f^d(x). Throws ValidationError for x < 0.
double supply_price(const SupplyCurve& curve, double x);

/// Inflexible demand: anticipated level d0, forecast error D ~ Normal(0,
/// sigma) optionally truncated at +-truncation*sigma, network capacity c.
/// All quantities in kWh.
struct UncertaintyModel {
    double sigma = 10'000.0;
    std::optional<double> truncation = 6.0;
    double d0 = 80'000.0;
    double capacity = 120'000.0;

    void validate() const;
    /// Integration support of D: the truncation interval, or +-12 sigma.
    double support_lower() const;
    double support_upper() const;
    /// Residual capacity left for flexible demand when D = d.
    double headroom(double d) const noexcept { return capacity - d0 - d; }
};

enum class CongestionCase { Interior, AlwaysCongested, NeverCongested };
std::string_view to_string(CongestionCase c);

/// Utility threshold U^c at which post-redispatch demand meets capacity.
struct CongestionPrice {
    double value = 0.0;
    CongestionCase tag = CongestionCase::Interior;
};

/// U^c = phi^-1(c - d0 - d), tagged by which clamp applied.
CongestionPrice congestion_price(const MeanFieldDemand& mf, const UncertaintyModel& unc,
                                 double d_realized);

/// Pi^r: 0 when U^c <= u_d, otherwise U^c.
double redispatch_price(const CongestionPrice& uc, double u_d);

/// The index-th draw of D for a seed; a pure function of its arguments.
double sample_inflexible_at(const UncertaintyModel& unc, std::uint64_t seed, std::uint64_t index);

/// n i.i.d. draws of D, equal to sample_inflexible_at(unc, seed, 0..n-1).
std::vector<double> sample_inflexible(const UncertaintyModel& unc, std::uint64_t seed, std::size_t n);

}  // namespace idgame
