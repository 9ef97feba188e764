#include "idgame/errors.hpp"
#include "idgame/population.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace idgame;

namespace {
const PopulationSpec base{};
}

TEST_CASE("sample_agents draws the requested count inside the intervals") {
    const auto agents = sample_agents(base, 1);
    REQUIRE(agents.size() == 10'000);
    for (const auto& a : agents) {
        CHECK_UNARY(a.utility >= 0.01);
        CHECK_UNARY(a.utility <= 0.3);
        CHECK_UNARY(a.e_max >= 3.0);
        CHECK_UNARY(a.e_max <= 10.0);
    }
    CHECK(agents == sample_agents(base, 1));
    CHECK_FALSE(agents == sample_agents(base, 2));
}

TEST_CASE("degenerate intervals give a single pinned agent") {
    const PopulationSpec spec{1, 0.1, 0.1 + 1e-12, 5.0, 5.0};
    const auto agents = sample_agents(spec, 9);
    REQUIRE(agents.size() == 1);
    CHECK(agents[0].utility == doctest::Approx(0.1));
    CHECK(agents[0].e_max == 5.0);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(sample_agents({0, 0.01, 0.3, 3, 10}, 1), ValidationError);
    CHECK_THROWS_AS(sample_agents({10, 0.3, 0.01, 3, 10}, 1), ValidationError);
    CHECK_THROWS_AS(sample_agents({10, 0.0, 0.3, 3, 10}, 1), ValidationError);
    CHECK_THROWS_AS(sample_agents({10, 0.01, 0.3, 10, 3}, 1), ValidationError);
    CHECK_THROWS_AS(mean_field_from_spec({10, 0.01, 0.3, 0, 3}), ValidationError);
}

TEST_CASE("closed-form mean field of the base population") {
    const auto mf = mean_field_from_spec(base);
    CHECK(mf.total_demand() == 65'000.0);
    CHECK(mf.phi(0.3) == 0.0);
    CHECK(mf.phi(0.155) == doctest::Approx(32'500.0).epsilon(1e-14));
    CHECK(mf.phi(0.01) == 65'000.0);
    CHECK(mf.phi(-1.0) == 65'000.0);
    CHECK(mf.phi(0.5) == 0.0);
    CHECK(mf.density(0.1) == doctest::Approx(65'000.0 / 0.29));
    CHECK(mf.density(0.31) == 0.0);
    CHECK(mf.utility_mass(0.01) == doctest::Approx(65'000.0 * 0.155));
}

TEST_CASE("phi_inverse clamps and inverts") {
    const auto mf = mean_field_from_spec(base);
    CHECK(phi_inverse(mf, 40'000.0) == doctest::Approx(0.3 - 40'000.0 * 0.29 / 65'000.0).epsilon(1e-14));
    CHECK(phi_inverse(mf, 40'000.0) == doctest::Approx(0.121538).epsilon(1e-5));
    CHECK(phi_inverse(mf, 70'000.0) == 0.01);
    CHECK(phi_inverse(mf, 0.0) == 0.3);
    CHECK(phi_inverse(mf, -5.0) == 0.3);
}

TEST_CASE("phi_inverse composed with phi is the identity on the support") {
    const auto mf = mean_field_from_spec(base);
    for (int i = 0; i <= 1000; ++i) {
        const double u = 0.01 + 0.29 * i / 1000.0;
        CHECK(std::abs(mf.phi_inverse(mf.phi(u)) - u) < 1e-9);
    }
    for (int i = 0; i <= 1000; ++i) {
        const double q = 65.0 * i;
        CHECK(std::abs(mf.phi(mf.phi_inverse(q)) - q) < 1e-9 * 65'000.0);
    }
}

TEST_CASE("phi is non-increasing on a grid") {
    const auto mf = mean_field_from_spec(base);
    double prev = mf.phi(-0.1);
    for (int i = 0; i <= 5000; ++i) {
        const double u = -0.1 + 0.5 * i / 5000.0;
        const double cur = mf.phi(u);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("empirical step curve") {
    const std::vector<Agent> agents{{0.1, 5.0}, {0.2, 3.0}};
    const auto mf = mean_field_from_agents(agents);
    CHECK(mf.is_empirical());
    CHECK(mf.phi(0.15) == 3.0);
    CHECK(mf.phi(0.05) == 8.0);
    CHECK(mf.phi(0.25) == 0.0);
    CHECK(mf.phi(0.1) == 8.0);  // agents with u_i >= u count
    CHECK(mf.phi(0.2) == 3.0);
    CHECK(mf.phi_inverse(3.0) == 0.2);
    CHECK(mf.phi_inverse(8.0) == 0.1);
    CHECK(mf.phi_inverse(5.0) == 0.2);
    CHECK_THROWS_AS(mean_field_from_agents({}), ValidationError);
}

TEST_CASE("empirical phi_inverse lands within one step of the closed form") {
    const auto agents = sample_agents(base, 5);
    const auto emp = mean_field_from_agents(agents);
    for (int i = 0; i <= 200; ++i) {
        const double u = emp.u_min() + (emp.u_max() - emp.u_min()) * i / 200.0;
        const double back = emp.phi_inverse(emp.phi(u));
        CHECK(emp.phi(back) == emp.phi(u));
        CHECK(back >= u - 1e-15);
    }
}

TEST_CASE("empirical curve converges to the mean field in sup norm") {
    const auto mf = mean_field_from_spec(base);
    int good = 0;
    const int seeds = 40;
    for (int s = 1; s <= seeds; ++s) {
        const auto emp = mean_field_from_agents(sample_agents(base, s));
        double sup = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double u = 0.01 + 0.29 * i / 2000.0;
            sup = std::max(sup, std::abs(emp.phi(u) - mf.phi(u)));
        }
        if (sup / mf.total_demand() < 0.03) ++good;
    }
    CHECK(good >= 0.95 * seeds);
}

TEST_CASE("phi csv has a header and the requested rows") {
    std::ostringstream out;
    write_phi_csv(out, mean_field_from_spec(base), 5);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "utility,phi_kwh");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
}
