// Small statistical helpers for the Monte Carlo experiments.

#pragma once

#include <cstdint>
#include <vector>

namespace loosehc {

// P(Poisson(lambda) = j), computed in log space for stability.
double poisson_pmf(int j, double lambda);

// Upper tail P(chi^2_dof > x) via the regularized incomplete gamma function.
double chi_square_sf(double x, int dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins_used = 0;
};

// Pearson chi-square goodness-of-fit of an observed count histogram against
// Poisson(lambda).  hist[j] is the number of observations equal to j.
// Adjacent outcomes are pooled left to right until each bin's expected count
// is at least min_expected, with the open upper tail folded into the last
// bin; dof = bins - 1.  Throws if fewer than two bins survive pooling.
ChiSquareResult poisson_chi_square_test(const std::vector<std::int64_t>& hist, double lambda,
                                        double min_expected = 5.0);

// Wilson score interval half-width helper: returns the standard deviation of
// an empirical frequency p_hat over n trials, sqrt(p_hat (1 - p_hat) / n).
double frequency_sigma(double p_hat, long n);

}  // namespace loosehc
