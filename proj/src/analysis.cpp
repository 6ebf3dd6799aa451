#include "loosehc/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace loosehc::analysis {

namespace {

using BigRat = boost::multiprecision::cpp_rational;

constexpr long double kLog2 = 0.6931471805599453094172321214581765680755L;

long double lfact(long long n) {
  if (n < 0) throw std::domain_error("factorial of negative argument");
  return std::lgamma(static_cast<long double>(n) + 1.0L);
}

// log((2N-1)!!) with (-1)!! = 1; (2N-1)!! = (2N)! / (2^N N!).
long double ldfact_odd(long long n_pairs) {
  if (n_pairs < 0) throw std::domain_error("double factorial of negative argument");
  return lfact(2 * n_pairs) - static_cast<long double>(n_pairs) * kLog2 - lfact(n_pairs);
}

long double lbinom(long long n, long long k) {
  if (k < 0 || k > n) throw std::domain_error("binomial coefficient out of range");
  return lfact(n) - lfact(k) - lfact(n - k);
}

BigInt big_factorial(long long n) {
  BigInt out = 1;
  for (long long i = 2; i <= n; ++i) out *= i;
  return out;
}

BigInt big_pow(BigInt base, long long exp) {
  BigInt out = 1;
  while (exp > 0) {
    if (exp & 1) out *= base;
    base *= base;
    exp >>= 1;
  }
  return out;
}

BigInt big_binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (long long i = 1; i <= k; ++i) {
    out *= (n - k + i);
    out /= i;
  }
  return out;
}

// z log z extended continuously to [0,1] with f(0) = f(1) = 0.  A small
// negative z from floating-point cancellation is clamped to the boundary.
long double zlogz(long double z) {
  if (z <= 0.0L || z >= 1.0L - 1e-18L) return 0.0L;
  return z * std::log(z);
}

void require_in_closure(double x, double y) {
  constexpr double slack = 1e-12;
  if (!(x >= -slack && y >= x - slack && y <= 1.0 - x + slack)) {
    throw std::domain_error("(x, y) outside the closed domain T");
  }
}

void require_in_open(double x, double y) {
  if (!(x > 0.0 && y > x && x + y < 1.0)) {
    throw std::domain_error("(x, y) outside the open domain S");
  }
}

long double ipow_ld(long double base, int exp) {
  long double out = 1.0L;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

long double g_core(long double x, long double y, int d, int kappa) {
  const long double D = d;
  const long double K = kappa;
  const long double ld = std::log(D);
  const long double ld1 = std::log(D - 1.0L);
  const long double ld2 = std::log(D - 2.0L);
  const long double ld3 = std::log(D - 3.0L);
  const long double ld4y = std::log(D - 4.0L + 2.0L * y);

  long double v = 0.0L;
  v += x * kLog2 - ld - ld1;
  v += (1.0L + x - y) * ld2;
  v += (1.0L - x - y) * ld3;
  v += zlogz(y);
  v += 2.0L * zlogz(1.0L - y);
  v -= zlogz(y - x);
  v -= 2.0L * zlogz(x);
  v -= zlogz(1.0L - x - y);
  v += (D / 2.0L - 2.0L + y) * ld4y;
  v += (D / 2.0L) * ld;
  v -= (D - 2.0L) * ld2;
  v += K * (D / 2.0L - 1.0L) * ld;
  v += K * zlogz(1.0L - y);
  v += K * (D / 2.0L - 2.0L + y) * ld4y;
  v -= K * (D - 3.0L + y) * ld2;
  return v;
}

void require_d_at_least(int d, int bound, const char* what) {
  if (d < bound) {
    throw std::domain_error(std::string(what) + " requires d >= " + std::to_string(bound));
  }
}

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

void AnalysisParams::validate() const {
  if (d < 6 || d % 2 != 0) throw std::invalid_argument("d must be even and >= 6");
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(precision > 0.0)) throw std::invalid_argument("precision must be positive");
}

BigInt a_2m(int m, int d) {
  if (m < 1) throw std::invalid_argument("a_2m requires m >= 1");
  if (d < 2) throw std::invalid_argument("a_2m requires d >= 2");
  const BigInt numerator =
      big_pow(BigInt(d) * (d - 1), 2LL * m) * big_factorial(2LL * m);
  const BigInt div = 4LL * m;
  if (numerator % div != 0) throw std::logic_error("a_2m division not exact");
  return numerator / div;
}

BigInt N_b(int m, int d, int b) {
  if (m < 1) throw std::invalid_argument("N_b requires m >= 1");
  if (d < 3) throw std::invalid_argument("N_b requires d >= 3");
  if (b < 0 || b > 2 * m - 1) throw std::invalid_argument("N_b requires 0 <= b <= 2m-1");
  const long long two_m = 2LL * m;
  BigRat sum = 0;
  const long long a_max = std::min<long long>(b, two_m - b);
  for (long long a = 0; a <= a_max; ++a) {
    if (a == 0 && b > 0) continue;  // prefactor carries a factor of a
    // 2am / (b (2m-b)), with a/b := 1 at a = b = 0.
    BigRat pref;
    if (a == 0 && b == 0) {
      pref = BigRat(two_m, two_m - b);
    } else {
      pref = BigRat(2 * a * m, b * (two_m - b));
    }
    BigRat term = pref;
    term *= BigRat(big_pow(2, a), 2);  // 2^{a-1}
    term *= big_pow(d - 2, two_m + a - b);
    term *= big_pow(d - 3, two_m - a - b);
    term *= big_factorial(two_m - b - 1);
    term *= big_binom(b, a);
    term *= big_binom(two_m - b, a);
    sum += term;
  }
  if (boost::multiprecision::denominator(sum) != 1) {
    throw std::logic_error("N_b sum is not an integer");
  }
  return boost::multiprecision::numerator(sum);
}

double log_p_2m_asym(int m, int d) {
  if (m < 1) throw std::invalid_argument("log_p_2m_asym requires m >= 1");
  require_d_at_least(d, 2, "p_2m");
  const long long dm = static_cast<long long>(d) * m;
  return static_cast<double>(1.0L + ldfact_odd(dm - 2LL * m) - ldfact_odd(dm));
}

double p_2m_asym(int m, int d) { return std::exp(log_p_2m_asym(m, d)); }

double log_q_2m_asym(int m, int kappa, int d) {
  if (m < 1 || kappa < 1) throw std::invalid_argument("log_q_2m_asym requires m, kappa >= 1");
  require_d_at_least(d, 2, "q_2m");
  const long long km = static_cast<long long>(kappa) * m;
  const long double val = (kappa - 1) / 2.0L +
                          2.0L * km * std::log(d / 2.0L) -
                          lbinom(km * d, 2 * km);
  return static_cast<double>(val);
}

double q_2m_asym(int m, int kappa, int d) { return std::exp(log_q_2m_asym(m, kappa, d)); }

double log_p_2m_b_asym(int m, int d, int b) {
  if (m < 1) throw std::invalid_argument("log_p_2m_b_asym requires m >= 1");
  if (b < 0 || b > 2 * m) throw std::invalid_argument("log_p_2m_b_asym requires 0 <= b <= 2m");
  const long long dm = static_cast<long long>(d) * m;
  const long long arg = dm - 4LL * m + b;
  if (arg < 0) throw std::domain_error("p_2m(b): negative double-factorial argument");
  return static_cast<double>(2.0L + ldfact_odd(arg) - ldfact_odd(dm));
}

double p_2m_b_asym(int m, int d, int b) { return std::exp(log_p_2m_b_asym(m, d, b)); }

double log_r_2m_b_asym(int m, int kappa, int d, int b) {
  if (m < 1 || kappa < 1) throw std::invalid_argument("log_r_2m_b_asym requires m, kappa >= 1");
  if (b < 0 || b > 2 * m) throw std::invalid_argument("log_r_2m_b_asym requires 0 <= b <= 2m");
  require_d_at_least(d, 4, "r_2m(b)");
  const long long km = static_cast<long long>(kappa) * m;
  const long long exp_half = 2 * km - static_cast<long long>(kappa) * b;  // 2km - kb
  const long long n1 = km * d - 2 * km;
  if (exp_half < 0 || exp_half > n1) {
    throw std::domain_error("r_2m(b): binomial argument out of range");
  }
  const long double val = (kappa - 1) / 2.0L +
                          static_cast<long double>(log_q_2m_asym(m, kappa, d)) +
                          exp_half * std::log(d / 2.0L - 1.0L) -
                          lbinom(n1, exp_half);
  return static_cast<double>(val);
}

double r_2m_b_asym(int m, int kappa, int d, int b) {
  return std::exp(log_r_2m_b_asym(m, kappa, d, b));
}

double supercritical_ratio(int d, int kappa) {
  require_d_at_least(d, 3, "supercritical_ratio");
  const long double log_r =
      std::log(static_cast<long double>(d - 1)) +
      (kappa + 1) * (d - 2) / 2.0L * (std::log(static_cast<long double>(d - 2)) - std::log(static_cast<long double>(d)));
  return static_cast<double>(std::exp(log_r));
}

ExpectedH expected_H_asym(int m, int d, int kappa) {
  if (m < 1 || kappa < 1) throw std::invalid_argument("expected_H_asym requires m, kappa >= 1");
  require_d_at_least(d, 4, "expected_H_asym");
  const long double log_r =
      std::log(static_cast<long double>(d - 1)) +
      (kappa + 1) * (d - 2) / 2.0L *
          (std::log(static_cast<long double>(d - 2)) - std::log(static_cast<long double>(d)));
  ExpectedH out;
  out.ratio = supercritical_ratio(d, kappa);
  out.log_asymptotic = static_cast<double>(
      (kappa + 1) / 2.0L + std::log(std::numbers::pi_v<long double>) +
      0.5L * std::log(static_cast<long double>(kappa) * (d - 2) / d) + 2.0L * m * log_r);
  const long double log_a = 2.0L * m * std::log(static_cast<long double>(d) * (d - 1)) +
                            lfact(2LL * m) - std::log(4.0L * m);
  out.log_product = static_cast<double>(log_a) + log_p_2m_asym(m, d) + log_q_2m_asym(m, kappa, d);
  return out;
}

Point2 critical_point(int d) {
  return {2.0 * (d - 2) / (static_cast<double>(d) * (d - 1)), 2.0 / d};
}

double y_cutoff(int kappa) { return 1.0 / (2.0 * (3 + 2 * kappa)); }

double g(double x, double y, int d, int kappa) {
  require_d_at_least(d, 5, "g");
  require_in_closure(x, y);
  const long double xl = std::max(0.0L, static_cast<long double>(x));
  const long double yl = std::clamp(static_cast<long double>(y), xl, 1.0L - xl);
  return static_cast<double>(g_core(xl, yl, d, kappa));
}

double h(double x, double y, int d) {
  require_d_at_least(d, 5, "h");
  require_in_open(x, y);
  const double num = std::sqrt(d * (d - 4.0 + 2.0 * y));
  const double den =
      std::sqrt((d - 2.0) * (d - 2.0) * y * (1.0 - y) * (1.0 - x - y) * (y - x));
  return num / den;
}

double Gradient2::norm() const { return std::hypot(dx, dy); }

Gradient2 grad_g(double x, double y, int d, int kappa) {
  require_d_at_least(d, 5, "grad_g");
  require_in_open(x, y);
  const long double X = x;
  const long double Y = y;
  const long double K = kappa;
  Gradient2 out;
  out.dx = static_cast<double>(kLog2 - std::log(static_cast<long double>(d - 3)) +
                               std::log(static_cast<long double>(d - 2)) - 2.0L * std::log(X) +
                               std::log(Y - X) + std::log(1.0L - X - Y));
  out.dy = static_cast<double>(-std::log(static_cast<long double>(d - 3)) -
                               (1.0L + K) * std::log(static_cast<long double>(d - 2)) -
                               (2.0L + K) * std::log(1.0L - Y) + std::log(1.0L - X - Y) +
                               std::log(Y) - std::log(Y - X) +
                               (1.0L + K) * std::log(static_cast<long double>(d) - 4.0L + 2.0L * Y));
  return out;
}

double Hessian2::det() const { return xx * yy - xy * xy; }

bool Hessian2::negative_definite() const { return xx < 0.0 && det() > 0.0; }

Hessian2 hessian_g(double x, double y, int d, int kappa) {
  require_d_at_least(d, 5, "hessian_g");
  require_in_open(x, y);
  const long double X = x;
  const long double Y = y;
  const long double K = kappa;
  Hessian2 out;
  out.xx = static_cast<double>(-2.0L / X + 1.0L / (X - Y) + 1.0L / (X + Y - 1.0L));
  out.xy = static_cast<double>(1.0L / (Y - X) + 1.0L / (X + Y - 1.0L));
  out.yy = static_cast<double>((2.0L + K) / (1.0L - Y) + 1.0L / (X - Y) + 1.0L / Y +
                               1.0L / (X + Y - 1.0L) +
                               2.0L * (1.0L + K) / (static_cast<long double>(d) - 4.0L + 2.0L * Y));
  return out;
}

Hessian2 hessian_at_critical(int d, int kappa) {
  require_d_at_least(d, 4, "hessian_at_critical");
  const long double D = d;
  const long double K = kappa;
  Hessian2 out;
  out.xx = static_cast<double>(-(D - 1.0L) * (D - 1.0L) * D / (2.0L * (D - 3.0L)));
  out.xy = static_cast<double>((D - 4.0L) * (D - 1.0L) * (D - 1.0L) * D /
                               (2.0L * (D - 2.0L) * (D - 3.0L)));
  const long double inner =
      16.0L + D * (-34.0L + D * (28.0L + (D - 9.0L) * D - 2.0L * K) + 6.0L * K);
  out.yy = static_cast<double>(-D * inner / (2.0L * (D - 3.0L) * (D - 2.0L) * (D - 2.0L)));
  return out;
}

double hessian_det_closed_form(int d, int kappa) {
  require_d_at_least(d, 4, "hessian_det_closed_form");
  const long double D = d;
  return static_cast<double>(D * D * D * (D - 1.0L) * (D - 1.0L) *
                             (D - 2.0L * (1.0L + kappa)) /
                             (4.0L * (D - 3.0L) * (D - 2.0L) * (D - 2.0L)));
}

double g1_boundary(double y, int d, int kappa) { return g(0.0, y, d, kappa); }

double g2_boundary(double y, int d, int kappa) { return g(y, y, d, kappa); }

double g2_prime(double y, int d, int kappa) {
  require_d_at_least(d, 5, "g2_prime");
  if (!(y > 0.0 && y < 0.5)) throw std::domain_error("g2_prime requires 0 < y < 1/2");
  const long double Y = y;
  const long double K = kappa;
  return static_cast<double>(
      kLog2 - 2.0L * std::log(static_cast<long double>(d - 3)) -
      K * std::log(static_cast<long double>(d - 2)) + 2.0L * std::log(1.0L - 2.0L * Y) -
      (2.0L + K) * std::log(1.0L - Y) - std::log(Y) +
      (1.0L + K) * std::log(static_cast<long double>(d) - 4.0L + 2.0L * Y));
}

double g2_second_derivative(double y, int d, int kappa) {
  require_d_at_least(d, 5, "g2_second_derivative");
  if (!(y > 0.0 && y < 0.5)) throw std::domain_error("g2_second_derivative requires 0 < y < 1/2");
  const long double Y = y;
  const long double K = kappa;
  return static_cast<double>((2.0L + K) / (1.0L - Y) - 1.0L / Y + 4.0L / (2.0L * Y - 1.0L) +
                             2.0L * (1.0L + K) / (static_cast<long double>(d) - 4.0L + 2.0L * Y));
}

double g3(double y, int d, int kappa) {
  require_d_at_least(d, 5, "g3");
  const long double D = d;
  const long double corr = (2.0L / 3.0L) * (D / 2.0L) * (D / 2.0L) *
                           std::log((D - 4.0L) / (D - 3.0L)) * static_cast<long double>(y) *
                           y * y;
  return static_cast<double>(static_cast<long double>(g2_boundary(y, d, kappa)) - corr);
}

double g3_at_2_over_d(int d) {
  require_d_at_least(d, 5, "g3_at_2_over_d");
  const long double D = d;
  return static_cast<double>((8.0L / (3.0L * D) - 1.0L) * std::log((D - 4.0L) / (D - 3.0L)) +
                             std::log((D - 2.0L) / (D - 1.0L)));
}

std::string CriticalPointReport::to_text() const {
  std::ostringstream os;
  os.precision(15);
  os << "d=" << d << '\n'
     << "kappa=" << kappa << '\n'
     << "grid_resolution=" << grid_resolution << '\n'
     << "critical_x=" << critical.x << '\n'
     << "critical_y=" << critical.y << '\n'
     << "g_at_critical=" << g_at_critical << '\n'
     << "gradient_norm=" << gradient_norm << '\n'
     << "hessian_xx=" << hessian.xx << '\n'
     << "hessian_xy=" << hessian.xy << '\n'
     << "hessian_yy=" << hessian.yy << '\n'
     << "det_numeric=" << det_numeric << '\n'
     << "det_closed_form=" << det_closed_form << '\n'
     << "negative_definite=" << (negative_definite ? 1 : 0) << '\n'
     << "grid_max_x=" << grid_max_point.x << '\n'
     << "grid_max_y=" << grid_max_point.y << '\n'
     << "grid_max_value=" << grid_max_value << '\n'
     << "refined_max_x=" << refined_max_point.x << '\n'
     << "refined_max_y=" << refined_max_point.y << '\n'
     << "refined_max_value=" << refined_max_value << '\n'
     << "grid_points_checked=" << grid_points_checked << '\n'
     << "violation_count=" << violation_count << '\n';
  std::size_t shown = 0;
  for (const auto& v : violations) {
    if (shown >= 5) break;
    os << "violation_" << shown << "=(" << v.x << ", " << v.y << ", " << v.value << ")\n";
    ++shown;
  }
  os << "boundary_g1_negative=" << (boundary_g1_negative ? 1 : 0) << '\n'
     << "boundary_g2_negative=" << (boundary_g2_negative ? 1 : 0) << '\n'
     << "g3_closed_form_negative=" << (g3_closed_form_negative ? 1 : 0) << '\n'
     << "exclusion_radius=" << exclusion_radius << '\n'
     << "tolerance=" << tolerance << '\n'
     << "global_max_verified=" << (global_max_verified ? 1 : 0) << '\n';
  return os.str();
}

namespace {

struct GridChunkResult {
  Point2 max_point;
  double max_value = -std::numeric_limits<double>::infinity();
  std::vector<GridViolation> violations;
  std::size_t checked = 0;
  std::vector<std::array<double, 3>> sink_rows;
};

GridChunkResult scan_rows(int row_begin, int row_end, int res, int d, int kappa,
                          Point2 crit, double radius, double tol, bool keep_rows) {
  GridChunkResult out;
  for (int i = row_begin; i < row_end; ++i) {
    const double x = 0.5 * i / res;
    for (int j = 0; j <= res; ++j) {
      const double y = static_cast<double>(j) / res;
      if (y < x || y > 1.0 - x) continue;
      const double value = g(x, y, d, kappa);
      ++out.checked;
      if (keep_rows) out.sink_rows.push_back({x, y, value});
      if (value > out.max_value) {
        out.max_value = value;
        out.max_point = {x, y};
      }
      if (value > tol && distance({x, y}, crit) > radius) {
        out.violations.push_back({x, y, value});
      }
    }
  }
  return out;
}

}  // namespace

CriticalPointReport verify_global_max(int d, int kappa, int grid_resolution, int threads,
                                      const GridSink& grid_sink) {
  if (kappa < 1) throw std::invalid_argument("verify_global_max requires kappa >= 1");
  if (d <= 2 * (1 + kappa)) {
    throw std::invalid_argument("verify_global_max requires d > 2(1+kappa)");
  }
  if (grid_resolution < 200) {
    throw std::invalid_argument("verify_global_max requires grid_resolution >= 200");
  }
  if (threads < 1) threads = 1;

  CriticalPointReport report;
  report.d = d;
  report.kappa = kappa;
  report.grid_resolution = grid_resolution;
  report.exclusion_radius = 0.01;
  report.tolerance = 1e-6;
  report.critical = critical_point(d);
  report.g_at_critical = g(report.critical.x, report.critical.y, d, kappa);
  report.gradient_norm = grad_g(report.critical.x, report.critical.y, d, kappa).norm();
  report.hessian = hessian_g(report.critical.x, report.critical.y, d, kappa);
  report.det_numeric = report.hessian.det();
  report.det_closed_form = hessian_det_closed_form(d, kappa);
  report.negative_definite = report.hessian.negative_definite();

  // Row-chunked scan; chunk results are merged in row order so the outcome
  // (and any sink output) is independent of the thread count.
  const int res = grid_resolution;
  const int rows = res + 1;
  const int chunk = std::max(1, rows / (threads * 4));
  std::vector<std::future<GridChunkResult>> futures;
  std::vector<GridChunkResult> serial_chunks;
  const bool keep_rows = static_cast<bool>(grid_sink);
  for (int begin = 0; begin < rows; begin += chunk) {
    const int end = std::min(rows, begin + chunk);
    if (threads > 1) {
      futures.push_back(std::async(std::launch::async, scan_rows, begin, end, res, d, kappa,
                                   report.critical, report.exclusion_radius, report.tolerance,
                                   keep_rows));
    } else {
      serial_chunks.push_back(scan_rows(begin, end, res, d, kappa, report.critical,
                                        report.exclusion_radius, report.tolerance, keep_rows));
    }
  }
  Point2 best{0.0, 0.0};
  double best_value = -std::numeric_limits<double>::infinity();
  auto merge = [&](GridChunkResult&& part) {
    report.grid_points_checked += part.checked;
    if (part.max_value > best_value) {
      best_value = part.max_value;
      best = part.max_point;
    }
    report.violation_count += part.violations.size();
    for (auto& v : part.violations) {
      if (report.violations.size() < 50) report.violations.push_back(v);
    }
    if (grid_sink) {
      for (const auto& row : part.sink_rows) grid_sink(row[0], row[1], row[2]);
    }
  };
  if (threads > 1) {
    for (auto& f : futures) merge(f.get());
  } else {
    for (auto& part : serial_chunks) merge(std::move(part));
  }
  report.grid_max_point = best;
  report.grid_max_value = best_value;

  // Local refinement around the grid maximizer: shrink the scan window a few
  // times to localize the maximum beyond grid resolution.
  Point2 refined = best;
  double refined_value = best_value;
  double step = 1.0 / res;  // window +-2*step covers the neighboring grid cells
  for (int round = 0; round < 5; ++round) {
    Point2 center = refined;
    for (int i = -8; i <= 8; ++i) {
      for (int j = -8; j <= 8; ++j) {
        const double x = center.x + step * i / 4.0;
        const double y = center.y + step * j / 4.0;
        if (x < 0.0 || y < x || y > 1.0 - x) continue;
        const double value = g(x, y, d, kappa);
        if (value > refined_value) {
          refined_value = value;
          refined = {x, y};
        }
      }
    }
    step /= 4.0;
  }
  report.refined_max_point = refined;
  report.refined_max_value = refined_value;

  // Boundary restrictions on (0, 1/(2(3+2kappa))].
  const double cutoff = y_cutoff(kappa);
  const int samples = 1000;
  bool g1_neg = true;
  bool g2_neg = true;
  for (int i = 1; i <= samples; ++i) {
    const double y = cutoff * i / samples;
    if (g1_boundary(y, d, kappa) >= 0.0) g1_neg = false;
    if (g2_boundary(y, d, kappa) >= 0.0) g2_neg = false;
  }
  report.boundary_g1_negative = g1_neg;
  report.boundary_g2_negative = g2_neg;
  report.g3_closed_form_negative = g3_at_2_over_d(d) < 0.0;

  report.global_max_verified =
      report.violation_count == 0 && g1_neg && g2_neg &&
      std::abs(report.refined_max_value) <= report.tolerance &&
      distance(report.refined_max_point, report.critical) <= report.exclusion_radius;
  return report;
}

namespace {

std::array<long double, 4> psi_terms(long double y, int d, int kappa) {
  const long double D = d;
  const long double one_minus = 1.0L - y;
  const long double d4 = D - 4.0L + 2.0L * y;
  const long double d2 = D - 2.0L;
  const long double d3 = D - 3.0L;
  std::array<long double, 4> t{};
  t[0] = 2.0L * (1.0L - 2.0L * y) * (1.0L - 2.0L * y) * ipow_ld(one_minus, kappa) *
         ipow_ld(d4, kappa + 1) * ipow_ld(d2, kappa + 2);
  t[1] = -y * ipow_ld(one_minus, 2 * kappa + 2) * (d2 * d3) * (d2 * d3) *
         ipow_ld(d2, 2 * kappa);
  t[2] = 2.0L * y * ipow_ld(one_minus, kappa + 1) * ipow_ld(d4, kappa + 1) * d3 *
         ipow_ld(d2, kappa + 1);
  t[3] = -y * ipow_ld(d4, 2 * kappa + 2);
  return t;
}

void require_psi_domain(double y, int /*kappa*/) {
  if (!(y > 0.0 && y < 1.0)) {
    throw std::domain_error("psi requires 0 < y < 1");
  }
}

}  // namespace

double psi_y(double y, int d, int kappa) {
  require_d_at_least(d, 5, "psi");
  require_psi_domain(y, kappa);
  const auto t = psi_terms(y, d, kappa);
  return static_cast<double>(t[0] + t[1] + t[2] + t[3]);
}

double psi_max_term(double y, int d, int kappa) {
  require_d_at_least(d, 5, "psi");
  require_psi_domain(y, kappa);
  const auto t = psi_terms(y, d, kappa);
  long double mx = 0.0L;
  for (const long double v : t) mx = std::max(mx, std::fabs(v));
  return static_cast<double>(mx);
}

double x_from_y(double y, int d, int kappa) {
  require_d_at_least(d, 5, "x_from_y");
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("x_from_y requires 0 < y < 1");
  const long double Y = y;
  const long double D = d;
  const long double one_minus = 1.0L - Y;
  const long double d4k1 = ipow_ld(D - 4.0L + 2.0L * Y, kappa + 1);
  const long double d2k1 = ipow_ld(D - 2.0L, kappa + 1);
  const long double num =
      Y * one_minus * ((D - 3.0L) * d2k1 * ipow_ld(one_minus, kappa + 1) - d4k1);
  const long double den = ipow_ld(one_minus, kappa + 2) * (D - 3.0L) * d2k1 - Y * d4k1;
  return static_cast<double>(num / den);
}

bool PsiRootReport::ok() const {
  return residual_at_root <= 1e-8 && monotone_decreasing && sign_change &&
         x_elimination_residual <= 1e-8;
}

PsiRootReport verify_psi_root(int d, int kappa) {
  require_d_at_least(d, 5, "verify_psi_root");
  if (kappa < 1) throw std::invalid_argument("verify_psi_root requires kappa >= 1");
  const double y0 = 2.0 / d;
  const double cutoff = y_cutoff(kappa);
  PsiRootReport report;
  report.residual_at_root = std::abs(psi_y(y0, d, kappa)) / psi_max_term(y0, d, kappa);

  const int samples = 1000;
  bool monotone = true;
  double prev = psi_y(cutoff / samples, d, kappa);
  for (int i = 2; i <= samples; ++i) {
    const double cur = psi_y(cutoff * i / samples, d, kappa);
    if (!(cur < prev)) {
      monotone = false;
      break;
    }
    prev = cur;
  }
  report.monotone_decreasing = monotone;

  const double hi = 2.0 * y0;  // <= 0.8 for d >= 5, inside the (0,1) domain
  report.sign_change = psi_y(y0 / 2.0, d, kappa) > 0.0 && psi_y(hi, d, kappa) < 0.0;

  // Substitute x(y) into exp(dg/dx) - 1; the same root y0 must emerge.
  auto eliminated = [&](double y) {
    const double x = x_from_y(y, d, kappa);
    return std::expm1(grad_g(x, y, d, kappa).dx);
  };
  report.x_elimination_residual = std::abs(eliminated(y0));
  double lo = y0 / 2.0;
  double up = hi;
  double flo = eliminated(lo);
  double fup = eliminated(up);
  if (flo > 0.0 && fup < 0.0) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + up);
      const double fm = eliminated(mid);
      if (fm > 0.0) {
        lo = mid;
        flo = fm;
      } else {
        up = mid;
        fup = fm;
      }
    }
    report.root_from_elimination = 0.5 * (lo + up);
  } else {
    report.root_from_elimination = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

double variance_ratio_bound(int d, int kappa) {
  if (kappa < 1) throw std::invalid_argument("variance_ratio_bound requires kappa >= 1");
  if (d <= 2 * (kappa + 1)) {
    throw std::domain_error("variance_ratio_bound requires d > 2(kappa+1)");
  }
  return std::sqrt(static_cast<double>(d) / (d - 2 * (kappa + 1)));
}

double hc_probability_bound(int d, int kappa) {
  if (kappa < 1) throw std::invalid_argument("hc_probability_bound requires kappa >= 1");
  if (d <= 2 * (kappa + 1)) {
    throw std::domain_error("hc_probability_bound requires d > 2(kappa+1)");
  }
  return 1.0 - 3.0 * kappa / d;
}

int smallest_d_for_inequality(int kappa) {
  if (kappa < 1) throw std::invalid_argument("smallest_d_for_inequality requires kappa >= 1");
  const int horizon = 10000;
  int last_failure = 2 * (kappa + 1);  // treat the excluded boundary as failing
  for (int d = 2 * (kappa + 1) + 2; d <= horizon; d += 2) {
    const double lhs = 2.0 - variance_ratio_bound(d, kappa);
    if (lhs < hc_probability_bound(d, kappa)) last_failure = d;
  }
  return last_failure + 2;
}

VarianceSum variance_sum_upper(int m, int d, int kappa) {
  if (m < 1 || kappa < 1) throw std::invalid_argument("variance_sum_upper requires m, kappa >= 1");
  require_d_at_least(d, 4, "variance_sum_upper");
  const long long two_m = 2LL * m;
  const long long dm = static_cast<long long>(d) * m;
  const long long km = static_cast<long long>(kappa) * m;
  if (dm - 4LL * m < 0) throw std::domain_error("variance_sum_upper: negative double factorial");

  const long double log_d2 = std::log(static_cast<long double>(d - 2));
  const long double log_d3 = std::log(static_cast<long double>(d - 3));  // 0 at d=4
  const long double log_dd1 = std::log(static_cast<long double>(d) * (d - 1));
  const long double log_half_d_minus = std::log(d / 2.0L - 1.0L);
  const long double log_half_d = std::log(d / 2.0L);
  const long double shared_y = lbinom(km * d, 2 * km) - 2.0L * km * log_half_d;
  const long double shared_x = ldfact_odd(dm) - 2.0L * ldfact_odd(dm - 2 * m) - lfact(two_m);

  long double best = -std::numeric_limits<long double>::infinity();
  long long best_a = 0;
  long long best_b = 0;
  std::vector<std::pair<long double, bool>> terms;  // (log term, is special cell)
  terms.reserve(static_cast<std::size_t>(m) * (2 * m + 1));
  for (long long b = 0; b < two_m; ++b) {
    const long long a_max = std::min(b, two_m - b);
    const long long exp_half = 2 * km - kappa * b;
    const long double y_part = exp_half * log_half_d_minus -
                               lbinom(km * d - 2 * km, exp_half) + shared_y;
    const long double b_part = lfact(two_m - b) + ldfact_odd(dm - 4 * m + b) + shared_x + y_part;
    for (long long a = 0; a <= a_max; ++a) {
      if (a == 0 && b > 0) continue;  // the summand carries a factor of a
      long double log_pref;
      if (a == 0 && b == 0) {
        // a(2m)^2/(b(2m-b)^2) with a/b := 1 reduces to 2m/(2m-b) = 1.
        log_pref = 0.0L;
      } else {
        log_pref = std::log(static_cast<long double>(a)) +
                   2.0L * std::log(static_cast<long double>(two_m)) -
                   std::log(static_cast<long double>(b)) -
                   2.0L * std::log(static_cast<long double>(two_m - b));
      }
      const long long e3 = two_m - a - b;
      const long double log_term = log_pref + a * kLog2 - two_m * log_dd1 +
                                   (two_m + a - b) * log_d2 + e3 * log_d3 +
                                   lbinom(b, a) + lbinom(two_m - b, a) + b_part;
      const bool special = (a == 0) || (a == b) || (a + b == two_m);
      terms.emplace_back(log_term, special);
      if (log_term > best) {
        best = log_term;
        best_a = a;
        best_b = b;
      }
    }
  }

  long double total = 0.0L;
  long double special_mass = 0.0L;
  for (const auto& [lt, special] : terms) {
    const long double w = std::exp(lt - best);
    total += w;
    if (special) special_mass += w;
  }

  VarianceSum out;
  const long double log_sum = best + std::log(total);
  const ExpectedH eh = expected_H_asym(m, d, kappa);
  out.log_expected_h = eh.log_product;
  // total = sum + 1/E(H), combined in log space.
  const long double log_inv_eh = -static_cast<long double>(eh.log_product);
  const long double mx = std::max(log_sum, log_inv_eh);
  out.log_total = static_cast<double>(mx + std::log(std::exp(log_sum - mx) +
                                                     std::exp(log_inv_eh - mx)));
  out.total = std::exp(out.log_total);
  out.argmax_a_frac = static_cast<double>(best_a) / two_m;
  out.argmax_b_frac = static_cast<double>(best_b) / two_m;
  out.special_share = static_cast<double>(special_mass / total);
  return out;
}

}  // namespace loosehc::analysis
