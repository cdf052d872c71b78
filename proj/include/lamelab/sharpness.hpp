#ifndef LAMELAB_SHARPNESS_HPP
#define LAMELAB_SHARPNESS_HPP

#include <string>
#include <vector>

#include "lamelab/field.hpp"
#include "lamelab/fitting.hpp"
#include "lamelab/grid.hpp"

namespace lamelab {

// ---------------------------------------------------------------------------
// Knapp slab experiment: a test function with frequency support in a
// delta x sqrt(delta)^{d-1} slab tangent to the unit sphere at e_d, observed
// on the dual box A_delta, drives the restricted ratio of the imaginary-part
// symbol to the lower bound delta^{-1 + (d+1)/2 (1/p - 1/q)}.
// ---------------------------------------------------------------------------

// hhat(xi) = psi((xi_d - 1)/delta) prod_{j<d-1} phi(xi_j / sqrt(delta)).
double knapp_profile(int d, double delta, const Eigen::VectorXd& xi);

// Anisotropic grid sized for the slab: tight axes ~ 1/sqrt(delta), slab axis
// ~ 1/delta, with the half-cell offset on (the symbol is sphere-singular).
PeriodicGrid knapp_grid(int d, double delta);

// Frequency-side construction, then inverse transform. Validates that the
// grid resolves both scales; throws UnresolvedScaleError with the minimal
// admissible point count otherwise.
VectorField knapp_field(int d, double delta, const PeriodicGrid& grid);

// Observation box {|x_d| <= 1/(100 delta), |x_j| <= 1/(100 d sqrt(delta))}.
std::vector<double> knapp_box_half_widths(int d, double delta);

// Brute-force sup of the raw I_delta over a fine frequency net near both
// singular spheres. Independent oracle for the p = q = 2 operator norm.
double imag_symbol_sup(int d, double delta, double rho);

struct SweepPoint {
  double delta = 0.0;
  double ratio = 0.0;     // ||1_A m(D) h||_q / ||h||_p
  double norm_f = 0.0;    // ||h||_p
  double norm_tf = 0.0;   // ||1_A m(D) h||_q
  double oracle = 0.0;    // sup-of-symbol oracle (p = q = 2 runs only)
};

struct SweepResult {
  std::vector<SweepPoint> points;
  LinearFit fit;           // log2(ratio) against log2(delta)
  double target_slope = 0.0;
};

enum class KnappMethod {
  SpectralQuadrature,  // slab-adapted quadrature in frequency and on A_delta
  GridTransform,       // full FFT grid through restricted_ratio (d = 2 scale)
};

// Fits the restricted-ratio exponent over a dyadic delta sweep.
// p = q = 2 observes the full grid (Plancherel regime; the sup oracle is the
// comparison point); other pairs observe A_delta.
SweepResult knapp_exponent(int d, double p, double q, const std::vector<double>& deltas,
                           double rho = 2.0, KnappMethod method = KnappMethod::SpectralQuadrature,
                           int threads = 1);

// ---------------------------------------------------------------------------
// Focusing experiment: the delta-independent source whose image under the
// shifted-sphere symbol m_delta(D) focuses on the cone slab B_delta, giving
// the lower bound delta^{(d-1)/2 - d/q}. Evaluation goes through the reduced
// 1-D integral in tau of I_delta(x; tau) phi(tau) rather than a d-dim grid.
// ---------------------------------------------------------------------------

// fhat on the shifted slab {|xi_1 + 1 - psi(xi')| <= 2 eps, |xi'| <= 1/10};
// the division factor (xi_1 + psi - 1)^2 / ((xi_1 + psi - 1)^2 + |xi'|^2)
// is inverted against the plateau profile.
double focusing_profile(int d, double rho, double eps_circ, const Eigen::VectorXd& xi);
VectorField focusing_field(int d, double rho, double eps_circ, const PeriodicGrid& grid);

enum class OscMethod { Quadrature, LeadingAsymptotic };

// I_delta(x; tau) = int e^{i(x'.xi' + x_1 psi(xi'))} a_delta(tau, xi') chi dxi'.
// Quadrature refines a radial rule until self-consistent; the leading term is
// c_d e^{i(x_1 - sgn(x_1)|x|)} a_delta(tau, -sgn(x_1) x'/|x|) |x_1|^{-(d-1)/2}
// with c_d calibrated once per dimension at (x_1 = 2^10, x' = 0, tau = 0,
// delta = 1/4) and frozen.
Cplx oscillatory_integral(int d, const Eigen::VectorXd& x, double tau, double delta,
                          OscMethod method);
Cplx calibrated_leading_constant(int d);

struct FocusingPoint {
  double delta = 0.0;
  double main_norm = 0.0;        // ||m_delta(D) f||_{L^q(B_delta)}
  double background_norm = 0.0;  // triangle-inequality envelope of the M term
  double q0_leading = 0.0;       // leading-order main term at the B center
  double q1_diag = 0.0;          // first corrector scale x_1^{-1} sup|d^2 a|
  double x1_low = 0.0, x1_high = 0.0;
};

struct FocusingResult {
  std::vector<FocusingPoint> points;
  LinearFit main_fit;        // target (d-1)/2 - d/q
  LinearFit background_fit;  // target one order higher in delta
  double target_slope = 0.0;
};

FocusingResult focusing_exponent(int d, double q, double rho, const std::vector<double>& deltas,
                                 double nu = 100.0, int threads = 1);

// ---------------------------------------------------------------------------
// Symbol derivative bounds: finite-difference sups of |d^alpha a_delta|
// against the closed-form envelope, and sup |b_delta| / delta, per delta.
// ---------------------------------------------------------------------------

struct DerivativeBoundRow {
  double delta = 0.0;
  std::vector<double> ratio_sup;  // one entry per multi-index, |alpha| <= 2
  double b_sup_over_delta = 0.0;
};

struct DerivativeBoundTable {
  int d = 0;
  std::vector<std::string> alpha_names;
  std::vector<DerivativeBoundRow> rows;
  // max/min spread of each column across the delta sweep
  std::vector<double> ratio_spread;
  double b_spread = 0.0;
};

DerivativeBoundTable derivative_bound_check(int d, const std::vector<double>& deltas, double rho);

// max over A_delta x supp(hhat) of |x . (xi - e_d)| (slab coherence check).
double knapp_phase_coherence(int d, double delta);

// 1-D profile norms of the slab factors; ||h_delta||_p factorizes as
// delta^{(1-1/p)} ||F^{-1}psi||_p * prod_j delta^{(1-1/p)/2} ||F^{-1}phi||_p.
double knapp_field_lp(int d, double delta, double p);

}  // namespace lamelab

#endif
