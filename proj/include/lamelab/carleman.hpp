#ifndef LAMELAB_CARLEMAN_HPP
#define LAMELAB_CARLEMAN_HPP

#include <vector>

#include "lamelab/field.hpp"
#include "lamelab/fitting.hpp"
#include "lamelab/sharpness.hpp"

namespace lamelab {

// ---------------------------------------------------------------------------
// Weighted-estimate failure experiments. The conjugated operator
// e^{v.x} (-Delta^*) e^{-v.x} has matrix symbol M_eta, eta = xi + iv, and its
// off-diagonal channel reduces to the scalar multiplier
// (xi_1 + i) xi_2 (|xi|^2 - 1 + 2 i xi_1)^{-2}, doubly singular on
// {xi_1 = 0, |xi| = 1}. Concentrating test functions near that set and
// sweeping the concentration scale measures the divergence exponents.
// ---------------------------------------------------------------------------

struct CarlemanConfig {
  int d;
  LameParameters params;
  Eigen::VectorXd v;      // |v| = 1
  Eigen::MatrixXcd m1;    // first-order coefficient (zero: pure conjugation)
  Eigen::MatrixXcd m2;    // zeroth-order coefficient

  CarlemanConfig(int d_, LameParameters par, Eigen::VectorXd v_);
};

// hhat(xi) = band(xi_1/delta) band((xi_2-1)/delta) shelf(|xi_bar|/sqrt(delta)),
// a bump at distance O(delta) from the singular point (0, 1, 0, ...).
double aniso_profile(int d, double delta, const Eigen::VectorXd& xi);
PeriodicGrid aniso_grid(int d, double delta);
VectorField aniso_field(int d, double delta, const PeriodicGrid& grid);

// Half-widths of the observation box: |x_1|, |x_2| <= 1/(100 delta),
// |x_bar| <= 1/(100 sqrt(delta)).
std::vector<double> aniso_box_half_widths(int d, double delta);

struct CarlemanSweep {
  SweepResult sweep;
  bool estimate_impossible = false;  // fitted slope < 0 certifies divergence
};

// ratio(delta) = ||1_{A_delta} carleman(D) h_delta||_q / ||h_delta||_p,
// fitted against the scaling prediction -2 + (d+2)/2 (1/p - 1/q).
CarlemanSweep carleman_exponent(int d, double p, double q, const std::vector<double>& deltas,
                                int threads = 1);

struct DivergencePoint {
  double eps = 0.0;
  double ln_inv_eps = 0.0;
  double value = 0.0;         // rearranged three-integral route
  double value_direct = 0.0;  // direct two-integral route (identity check)
};

struct DivergenceResult {
  std::vector<DivergencePoint> points;
  LinearFit fit;  // value against ln(1/eps)
  bool monotone = false;
};

// d = 2 endpoint failure of the conjugated system: Re u_2(0) against
// ln(1/eps) for the annulus source, f = (0, h_eps), v = e_1. Requires
// rho != 1 and eps <= 1/8.
DivergenceResult log_divergence(const LameParameters& params,
                                const std::vector<double>& eps_list);

// d = 2 inadmissibility at (p,q) = (1,inf): Re T_z h_eps(0) against
// ln(1/eps) for |z| = 1, z != 1. Requires eps <= min(1, sqrt(rho))/2.
DivergenceResult admissibility_divergence(Cplx z, double rho,
                                          const std::vector<double>& eps_list);

// ||h_eps||_{L^1(R^2)}, radial quadrature. Bounded uniformly in eps.
double annulus_field_l1(double eps);

// uhat = (M_eta + i M1 diag(eta) + M2)^{-1} fhat on the grid lattice.
// With m1 = m2 = 0 this is the closed-form conjugated inverse.
VectorField conjugated_solve(const CarlemanConfig& config, const VectorField& f);

struct ScalingCheck {
  std::vector<double> scales;
  std::vector<double> ratios;
  LinearFit fit;
  double target_exponent = 0.0;  // d (1/p - 1/q) - 2
  bool bounded = false;          // |fitted slope| <= 0.05
};

// Dilates a fixed smooth field by x -> s x (weight direction rescaled with
// it) and fits ||u_s||_q / ||conjugated op u_s||_p as a power of s.
ScalingCheck scaling_necessity_check(int d, double p, double q,
                                     const std::vector<double>& scales,
                                     const LameParameters& params);

}  // namespace lamelab

#endif
