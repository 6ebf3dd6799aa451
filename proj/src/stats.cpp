#include "loosehc/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace loosehc {

double poisson_pmf(int j, double lambda) {
  if (j < 0) throw std::invalid_argument("poisson_pmf: j must be nonnegative");
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_pmf: lambda must be positive");
  return std::exp(j * std::log(lambda) - lambda - std::lgamma(j + 1.0));
}

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

ChiSquareResult poisson_chi_square_test(const std::vector<std::int64_t>& hist, double lambda,
                                        double min_expected) {
  const double n = static_cast<double>(std::accumulate(hist.begin(), hist.end(), std::int64_t{0}));
  if (n <= 0.0) throw std::invalid_argument("poisson_chi_square_test: empty histogram");
  if (!(min_expected > 0.0)) {
    throw std::invalid_argument("poisson_chi_square_test: min_expected must be positive");
  }

  // Pool outcomes 0,1,2,... left to right into bins with expected >= min_expected.
  std::vector<double> expected;
  std::vector<double> observed;
  double acc_exp = 0.0, acc_obs = 0.0, tail_prob = 1.0;
  for (std::size_t j = 0; j < hist.size(); ++j) {
    const double pj = poisson_pmf(static_cast<int>(j), lambda);
    tail_prob -= pj;
    acc_exp += n * pj;
    acc_obs += static_cast<double>(hist[j]);
    if (acc_exp >= min_expected) {
      expected.push_back(acc_exp);
      observed.push_back(acc_obs);
      acc_exp = 0.0;
      acc_obs = 0.0;
    }
  }
  // Fold the open upper tail (outcomes beyond the histogram) into the last bin.
  acc_exp += n * std::max(tail_prob, 0.0);
  if (expected.empty() || acc_exp >= min_expected) {
    expected.push_back(acc_exp);
    observed.push_back(acc_obs);
  } else {
    expected.back() += acc_exp;
    observed.back() += acc_obs;
  }

  if (expected.size() < 2) {
    throw std::invalid_argument("poisson_chi_square_test: fewer than two bins after pooling");
  }
  ChiSquareResult r;
  r.bins_used = static_cast<int>(expected.size());
  r.dof = r.bins_used - 1;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    r.statistic += diff * diff / expected[i];
  }
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

double frequency_sigma(double p_hat, long n) {
  if (n < 1) throw std::invalid_argument("frequency_sigma: n must be positive");
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

}  // namespace loosehc
