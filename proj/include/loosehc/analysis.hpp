#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace loosehc::analysis {

using BigInt = boost::multiprecision::cpp_int;

// Parameter bundle for report-style entry points.  Individual functions take
// explicit arguments; this struct carries the shared preconditions.
struct AnalysisParams {
  int d = 6;
  int kappa = 1;
  int m = 1;
  double precision = 1e-12;
  bool exact_mode = true;

  // Throws std::invalid_argument unless d is even, d >= 6, kappa >= 1, m >= 1.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Exact counting quantities.
// ---------------------------------------------------------------------------

// Number of 2m-cycles on the X point set: (d(d-1))^{2m} (2m)! / (4m).
// Exact big integer; the division is always exact because d(d-1) is even.
BigInt a_2m(int m, int d);

// Number of 2m-cycles compatible with a fixed 2m-cycle and sharing exactly b
// of its pairs (compatible: the non-shared pairs avoid the fixed cycle's
// points entirely, as required for both cycles to embed in one pairing).
//
//   N(b) = sum_{a=0}^{min(b,2m-b)} (2am/(b(2m-b))) 2^{a-1}
//          (d-2)^{2m+a-b} (d-3)^{2m-a-b} (2m-b-1)! C(b,a) C(2m-b,a),
//
// with a/b := 1 when a = b = 0.  Requires 0 <= b <= 2m-1 and d >= 3.
BigInt N_b(int m, int d, int b);

// ---------------------------------------------------------------------------
// Log-space asymptotic probabilities (long double internally).
// ---------------------------------------------------------------------------

// log of p_2m = e (2dm-4m-1)!! / (2dm-1)!!  (pair probability under U).
double log_p_2m_asym(int m, int d);
double p_2m_asym(int m, int d);

// log of q_2m = e^{(kappa-1)/2} (d/2)^{2 kappa m} / C(kappa d m, 2 kappa m).
double log_q_2m_asym(int m, int kappa, int d);
double q_2m_asym(int m, int kappa, int d);

// log of p_2m(b) = e^2 (2dm-8m+2b-1)!! / (2dm-1)!!  (two overlapping cycles).
double log_p_2m_b_asym(int m, int d, int b);
double p_2m_b_asym(int m, int d, int b);

// log of r_2m(b) = e^{(kappa-1)/2} q_2m (d/2-1)^{2km-kb} / C(kdm-2km, 2km-kb).
double log_r_2m_b_asym(int m, int kappa, int d, int b);
double r_2m_b_asym(int m, int kappa, int d, int b);

// Per-2m growth ratio r(d,kappa) = (d-1) ((d-2)/d)^{(kappa+1)(d-2)/2}.
// E(H) -> infinity iff r > 1, which holds for d > e^{kappa+1} + 1.
double supercritical_ratio(int d, int kappa);

struct ExpectedH {
  double log_asymptotic = 0.0;  // log of the closed-form asymptotic for E(H)
  double log_product = 0.0;     // log(a_2m * p_2m * q_2m), factorials exact
  double ratio = 0.0;           // supercritical_ratio(d, kappa)
};

// Expected number of restricted loose Hamilton cycles in Lambda_d:
//   E(H) ~ e^{(kappa+1)/2} pi sqrt(kappa (d-2)/d) * r(d,kappa)^{2m}.
// Returns both the asymptotic log value and the exact finite-m product log
// for convergence cross-checks.
ExpectedH expected_H_asym(int m, int d, int kappa);

// ---------------------------------------------------------------------------
// The rate function g and its calculus.
// ---------------------------------------------------------------------------

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Critical point (x0, y0) = (2(d-2)/(d(d-1)), 2/d).
Point2 critical_point(int d);

// Upper end of the y-interval handled by the boundary analysis: 1/(2(3+2k)).
double y_cutoff(int kappa);

// Rate function g(x,y) on the closed triangle T = {0 <= x <= y <= 1-x},
// using the continuous extension f(z) = z log z, f(0) = f(1) = 0 for the
// entropy terms.  Requires d >= 5; throws std::domain_error outside T.
double g(double x, double y, int d, int kappa);

// Laplace prefactor h(x,y) = sqrt(d(d-4+2y)) /
// sqrt((d-2)^2 y (1-y)(1-x-y)(y-x)); open domain S = {0 < x < y < 1-x} only.
double h(double x, double y, int d);

struct Gradient2 {
  double dx = 0.0;
  double dy = 0.0;
  double norm() const;
};

// Closed-form gradient of g; open domain S only.
Gradient2 grad_g(double x, double y, int d, int kappa);

struct Hessian2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
  double det() const;
  // Negative definite iff xx < 0 and det > 0.
  bool negative_definite() const;
};

// Closed-form Hessian of g; open domain S only.
Hessian2 hessian_g(double x, double y, int d, int kappa);

// Hessian entries evaluated at (x0,y0) via the simplified closed forms.
Hessian2 hessian_at_critical(int d, int kappa);

// Det D^2 g(x0,y0) = d^3 (d-1)^2 (d - 2(1+kappa)) / (4 (d-3)(d-2)^2).
double hessian_det_closed_form(int d, int kappa);

// Boundary restrictions and their derivatives.
double g1_boundary(double y, int d, int kappa);        // g(0, y)
double g2_boundary(double y, int d, int kappa);        // g(y, y)
double g2_prime(double y, int d, int kappa);           // d/dy g2
double g2_second_derivative(double y, int d, int kappa);
// Majorant g3(y) = g2(y) - (2/3)(d/2)^2 log((d-4)/(d-3)) y^3.
double g3(double y, int d, int kappa);
// g3(2/d) = (8/(3d) - 1) log((d-4)/(d-3)) + log((d-2)/(d-1)).
double g3_at_2_over_d(int d);

struct GridViolation {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

struct CriticalPointReport {
  int d = 0;
  int kappa = 0;
  int grid_resolution = 0;

  Point2 critical;
  double g_at_critical = 0.0;
  double gradient_norm = 0.0;
  Hessian2 hessian;
  double det_numeric = 0.0;
  double det_closed_form = 0.0;
  bool negative_definite = false;

  Point2 grid_max_point;
  double grid_max_value = 0.0;
  Point2 refined_max_point;
  double refined_max_value = 0.0;
  std::size_t grid_points_checked = 0;

  // Grid points outside the exclusion radius with g > tolerance (capped at
  // 50 stored entries; violation_count has the full count).
  std::vector<GridViolation> violations;
  std::size_t violation_count = 0;

  bool boundary_g1_negative = false;
  bool boundary_g2_negative = false;
  bool g3_closed_form_negative = false;

  double exclusion_radius = 0.0;
  double tolerance = 0.0;
  bool global_max_verified = false;

  // Plain-text key=value block, one entry per line.
  std::string to_text() const;
};

// Optional per-grid-point sink (x, y, g); called in deterministic row-major
// order regardless of thread count.
using GridSink = std::function<void(double, double, double)>;

// Dense grid sweep plus local refinement over T verifying that g attains its
// unique maximum 0 at (x0,y0) and is <= tolerance elsewhere, and that the
// boundary restrictions g1, g2 are negative on (0, 1/(2(3+2kappa))].
// Requires d > 2(1+kappa) and grid_resolution >= 200.
CriticalPointReport verify_global_max(int d, int kappa, int grid_resolution,
                                      int threads = 1,
                                      const GridSink& grid_sink = {});

// ---------------------------------------------------------------------------
// The root equation psi(y) = 0.
// ---------------------------------------------------------------------------

// psi(y) = 2(1-2y)^2 (1-y)^k (d-4+2y)^{k+1} (d-2)^{k+2}
//          - y (1-y)^{2k+2} ((d-2)(d-3))^2 (d-2)^{2k}
//          + 2y (1-y)^{k+1} (d-4+2y)^{k+1} (d-3) (d-2)^{k+1}
//          - y (d-4+2y)^{2k+2}.
// The polynomial is evaluated on 0 < y < 1; the monotone-decrease claim is
// specific to (0, 1/(2(3+2k))].
double psi_y(double y, int d, int kappa);

// Largest |term| of psi at y, for relative residual normalization.
double psi_max_term(double y, int d, int kappa);

// x as a function of y from solving dg/dy = 0 (linear in x).
double x_from_y(double y, int d, int kappa);

struct PsiRootReport {
  double residual_at_root = 0.0;        // |psi(2/d)| / max term
  bool monotone_decreasing = false;     // sampled strict decrease on (0, cutoff]
  bool sign_change = false;             // psi(y0/2) > 0 > psi(2 y0)
  double x_elimination_residual = 0.0;  // |exp(dg/dx(x(y0), y0)) - 1|
  double root_from_elimination = 0.0;   // bisection root of exp(dg/dx)-1 on y
  bool ok() const;
};

// Verifies psi(2/d) = 0 (relative tolerance 1e-8), sampled monotonicity,
// the sign change around the root, and the x-elimination consistency.
PsiRootReport verify_psi_root(int d, int kappa);

// ---------------------------------------------------------------------------
// Variance bound and the finite double sum.
// ---------------------------------------------------------------------------

// sqrt(d / (d - 2(kappa+1))); requires d > 2(kappa+1).
double variance_ratio_bound(int d, int kappa);

// 1 - 3 kappa / d; requires d > 2(kappa+1).
double hc_probability_bound(int d, int kappa);

// Smallest even d for which 2 - sqrt(d/(d-2(kappa+1))) >= 1 - 3 kappa/d holds
// at d and at every larger even value scanned (horizon 10^4).
int smallest_d_for_inequality(int kappa);

struct VarianceSum {
  double log_total = 0.0;      // log(1/E(H) + double sum)
  double total = 0.0;
  double argmax_a_frac = 0.0;  // a*/(2m) of the dominant summand
  double argmax_b_frac = 0.0;  // b*/(2m)
  double special_share = 0.0;  // mass share of a=0, a=b, a+b=2m cells
  double log_expected_h = 0.0; // exact-product log E(H) used for the 1/E term
};

// Evaluates 1/E(H) + sum_{b=0}^{2m-1} N(b) p_2m(b) r_2m(b) / (a_2m p^2 q^2)
// term-exactly in log space (double factorials and binomials exact).
// Requires d >= 4; the sum upper-bounds E(H^2)/E(H)^2.
VarianceSum variance_sum_upper(int m, int d, int kappa);

}  // namespace loosehc::analysis
