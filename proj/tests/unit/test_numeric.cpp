#include "idgame/numeric.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace idgame::numeric;

TEST_CASE("pairwise_sum matches exact integer sums") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("mean_and_error of a two-point sample") {
    const std::vector<double> v{1.0, 3.0};
    const auto e = mean_and_error(v);
    CHECK(e.mean == doctest::Approx(2.0));
    CHECK(e.std_error == doctest::Approx(1.0));  // sd sqrt(2), / sqrt(2)
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    for (int n : {1, 2, 5, 16, 129}) {
        const auto& rule = gauss_legendre(n);
        CHECK(rule.size() == n);
        double wsum = 0.0;
        for (double w : rule.weights()) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
        const int degree = 2 * n - 1;
        const double exact = (std::pow(2.0, degree + 1) - 0.0) / (degree + 1);
        CHECK(rule.integrate([&](double x) { return std::pow(x, degree); }, 0.0, 2.0) ==
              doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("normal cdf and pdf reference values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327));
}

TEST_CASE("counter random numbers are pure functions of their counters") {
    CHECK(counter_uniform(7, 1, 42) == counter_uniform(7, 1, 42));
    CHECK(counter_uniform(7, 1, 42) != counter_uniform(7, 1, 43));
    CHECK(counter_uniform(7, 1, 42) != counter_uniform(8, 1, 42));
    double sum = 0.0, sq = 0.0;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        const double u = counter_uniform(3, 0, i);
        CHECK_UNARY(u >= 0.0);
        CHECK_UNARY(u < 1.0);
        const double z = counter_normal(3, 5, i);
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
}
