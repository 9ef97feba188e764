#include "generators.hpp"
#include "idgame/errors.hpp"
#include "idgame/market_model.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace idgame;

namespace {
const auto mf = mean_field_from_spec({});
UncertaintyModel net(double c, double d0, double sigma = 0.0) { return {sigma, 6.0, d0, c}; }
}  // namespace

TEST_CASE("power-law supply values") {
    const auto f = SupplyCurve::power_law(0.15, 1.2e5, 1.5);
    CHECK(supply_price(f, 1.2e5) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(supply_price(f, 0.0) == 0.0);
    CHECK(supply_price(f, 3e4) == doctest::Approx(0.01875).epsilon(1e-14));
    CHECK_THROWS_AS(supply_price(f, -1.0), ValidationError);
    CHECK(f.strictly_increasing());
    CHECK_FALSE(f.is_fixed_price());
}

TEST_CASE("supply curve validation") {
    CHECK_THROWS_AS(SupplyCurve::power_law(0.0, 1e5, 1.5), ValidationError);
    CHECK_THROWS_AS(SupplyCurve::power_law(0.1, 0.0, 1.5), ValidationError);
    CHECK_THROWS_AS(SupplyCurve::power_law(0.1, 1e5, 0.5), ValidationError);
    CHECK_THROWS_AS(SupplyCurve(PiecewiseLinear{{{0, 0.1}, {0, 0.2}}}), ValidationError);
    CHECK_THROWS_AS(SupplyCurve(PiecewiseLinear{{{0, 0.2}, {10, 0.1}}}), ValidationError);
    CHECK_THROWS_AS(SupplyCurve(PiecewiseLinear{{{0, 0.2}}}), ValidationError);
}

TEST_CASE("fixed and piecewise supply") {
    const auto fixed = SupplyCurve::fixed(0.05);
    CHECK(fixed.price(1e9) == 0.05);
    CHECK_FALSE(fixed.strictly_increasing());
    CHECK(fixed.is_fixed_price());
    CHECK(std::isinf(fixed.quantity_at(0.05)));
    CHECK(fixed.quantity_at(0.04) == -1.0);

    const SupplyCurve pw(PiecewiseLinear{{{0, 0.02}, {1e5, 0.12}, {2e5, 0.32}}});
    CHECK(pw.price(5e4) == doctest::Approx(0.07));
    CHECK(pw.price(3e5) == doctest::Approx(0.52));
    CHECK(pw.quantity_at(0.07) == doctest::Approx(5e4));
    CHECK(pw.quantity_at(0.22) == doctest::Approx(1.5e5));
    CHECK(pw.strictly_increasing());
    const SupplyCurve flat(PiecewiseLinear{{{0, 0.02}, {1e5, 0.12}, {2e5, 0.12}}});
    CHECK_FALSE(flat.strictly_increasing());
}

TEST_CASE("power-law quantity_at inverts price") {
    const auto f = SupplyCurve::power_law(0.15, 1.2e5, 1.5);
    for (double x : {1e3, 5e4, 1.2e5, 3e5}) CHECK(f.quantity_at(f.price(x)) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("congestion price cases") {
    const auto interior = congestion_price(mf, net(120'000, 80'000), 0.0);
    CHECK(interior.tag == CongestionCase::Interior);
    CHECK(interior.value == doctest::Approx(0.121538).epsilon(1e-5));

    const auto always = congestion_price(mf, net(120'000, 130'000), 0.0);
    CHECK(always.tag == CongestionCase::AlwaysCongested);
    CHECK(always.value == 0.3);
    CHECK(congestion_price(mf, net(120'000, 130'000), 5'000.0).tag == CongestionCase::AlwaysCongested);

    const auto never = congestion_price(mf, net(150'000, 80'000), 5'000.0);
    CHECK(never.tag == CongestionCase::NeverCongested);
    CHECK(never.value == 0.01);
}

TEST_CASE("redispatch price branches") {
    CHECK(redispatch_price({0.08, CongestionCase::Interior}, 0.1) == 0.0);
    CHECK(redispatch_price({0.2, CongestionCase::Interior}, 0.1) == 0.2);
    CHECK(redispatch_price({0.1, CongestionCase::Interior}, 0.1) == 0.0);
    CHECK_THROWS_AS(redispatch_price({0.1, CongestionCase::Interior}, -0.1), ValidationError);
}

TEST_CASE("inflexible demand sampling") {
    const auto zero = sample_inflexible(net(1, 1, 0.0), 3, 100);
    for (double d : zero) CHECK(d == 0.0);

    const auto unc = net(120'000, 80'000, 10'000);
    // A 3-sigma band on the mean is exceeded 0.27% of the time, so allow a
    // couple of the 50 seeds outside it.
    int outside = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto draws = sample_inflexible(unc, seed, 100'000);
        double sum = 0.0;
        for (double d : draws) sum += d;
        if (std::abs(sum / draws.size()) >= 3.0 * 10'000.0 / std::sqrt(100'000.0)) ++outside;
    }
    CHECK(outside <= 2);
    const auto draws = sample_inflexible(unc, 11, 100'000);
    for (double d : draws) CHECK(std::abs(d) <= 60'000.0);
    CHECK(draws == sample_inflexible(unc, 11, 100'000));
    CHECK(draws[17] == sample_inflexible_at(unc, 11, 17));
    CHECK_THROWS_AS(sample_inflexible(unc, 1, 0), ValidationError);

    UncertaintyModel tight = unc;
    tight.truncation = 0.5;
    for (double d : sample_inflexible(tight, 2, 5000)) CHECK(std::abs(d) <= 5'000.0);
}

TEST_CASE("uncertainty validation") {
    CHECK_THROWS_AS((UncertaintyModel{-1.0, 6.0, 0, 1}.validate()), ValidationError);
    CHECK_THROWS_AS((UncertaintyModel{1.0, 0.0, 0, 1}.validate()), ValidationError);
    CHECK_THROWS_AS((UncertaintyModel{1.0, 6.0, 0, 0}.validate()), ValidationError);
}

TEST_CASE("property: conservation after redispatch in the interior case") {
    gen::Rng rng(101);
    for (int i = 0; i < 2000; ++i) {
        const auto unc = net(rng.uniform(5e4, 2e5), rng.uniform(0, 1.5e5), rng.uniform(0, 2e4));
        const double d = rng.uniform(-3e4, 3e4);
        const auto uc = congestion_price(mf, unc, d);
        if (uc.tag != CongestionCase::Interior) continue;
        CHECK(std::abs(unc.d0 + d + mf.phi(uc.value) - unc.capacity) <= 1e-6 * unc.capacity);
        CHECK_UNARY(uc.value > mf.u_min());
        CHECK_UNARY(uc.value < mf.u_max());
    }
}

TEST_CASE("property: congestion price monotone in capacity and realized load") {
    gen::Rng rng(202);
    for (int i = 0; i < 2000; ++i) {
        const double c = rng.uniform(5e4, 2e5), d0 = rng.uniform(0, 1.5e5), d = rng.uniform(-3e4, 3e4);
        const double dc = rng.uniform(0, 2e4), dd = rng.uniform(0, 2e4);
        const double base = congestion_price(mf, net(c, d0), d).value;
        CHECK(congestion_price(mf, net(c + dc, d0), d).value <= base);
        CHECK(congestion_price(mf, net(c, d0), d + dd).value >= base);
        const auto uc = congestion_price(mf, net(c, d0), d);
        const double u1 = rng.uniform(0, 0.3), u2 = u1 + rng.uniform(0, 0.1);
        CHECK(redispatch_price(uc, u2) <= redispatch_price(uc, u1));
    }
}
