#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "loosehc/stats.hpp"

using loosehc::chi_square_sf;
using loosehc::ChiSquareResult;
using loosehc::frequency_sigma;
using loosehc::poisson_chi_square_test;
using loosehc::poisson_pmf;

TEST_SUITE("stats") {
  TEST_CASE("poisson pmf closed-form values") {
    CHECK_EQ(poisson_pmf(0, 3.5), doctest::Approx(std::exp(-3.5)).epsilon(1e-12));
    CHECK_EQ(poisson_pmf(3, 2.5),
             doctest::Approx(std::exp(-2.5) * 2.5 * 2.5 * 2.5 / 6.0).epsilon(1e-12));
    double total = 0.0;
    for (int j = 0; j <= 80; ++j) total += poisson_pmf(j, 3.5);
    CHECK_EQ(total, doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(poisson_pmf(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(poisson_pmf(2, 0.0), std::invalid_argument);
  }

  TEST_CASE("chi-square survival function reference values") {
    CHECK_EQ(chi_square_sf(0.0, 3), doctest::Approx(1.0).epsilon(1e-12));
    // dof=2 tail is exactly exp(-x/2).
    CHECK_EQ(chi_square_sf(5.991464547, 2), doctest::Approx(0.05).epsilon(1e-8));
    // Standard 95th percentile of chi^2_1.
    CHECK_EQ(chi_square_sf(3.841458821, 1), doctest::Approx(0.05).epsilon(1e-6));
    CHECK(chi_square_sf(10.0, 4) < chi_square_sf(5.0, 4));
    CHECK_THROWS_AS(chi_square_sf(1.0, 0), std::invalid_argument);
  }

  TEST_CASE("goodness-of-fit accepts a near-perfect Poisson histogram") {
    const double lambda = 3.5;
    const long n = 100000;
    std::vector<std::int64_t> hist;
    long assigned = 0;
    for (int j = 0; j < 15; ++j) {
      const auto c = static_cast<std::int64_t>(std::llround(n * poisson_pmf(j, lambda)));
      hist.push_back(c);
      assigned += c;
    }
    hist[0] += n - assigned;  // keep the total exactly n
    const ChiSquareResult r = poisson_chi_square_test(hist, lambda);
    CHECK(r.p_value > 0.5);
    CHECK(r.bins_used >= 5);
    CHECK_EQ(r.dof, r.bins_used - 1);
  }

  TEST_CASE("goodness-of-fit rejects a degenerate histogram") {
    std::vector<std::int64_t> hist{10000};  // all observations equal to 0
    const ChiSquareResult r = poisson_chi_square_test(hist, 3.5);
    CHECK(r.p_value < 1e-9);
  }

  TEST_CASE("pooling keeps expected counts above the threshold") {
    std::vector<std::int64_t> hist{30, 40, 20, 8, 2};
    const ChiSquareResult r = poisson_chi_square_test(hist, 1.2, 5.0);
    CHECK(r.bins_used >= 2);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    // Forcing absurd per-bin expectations leaves fewer than two bins.
    CHECK_THROWS_AS(poisson_chi_square_test(hist, 1.2, 1e9), std::invalid_argument);
    CHECK_THROWS_AS(poisson_chi_square_test({}, 1.2), std::invalid_argument);
  }

  TEST_CASE("frequency sigma") {
    CHECK_EQ(frequency_sigma(0.2, 20000),
             doctest::Approx(std::sqrt(0.2 * 0.8 / 20000.0)).epsilon(1e-12));
    CHECK_EQ(frequency_sigma(0.0, 100), 0.0);
    CHECK_THROWS_AS(frequency_sigma(0.5, 0), std::invalid_argument);
  }
}
