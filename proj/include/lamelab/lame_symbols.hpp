#ifndef LAMELAB_LAME_SYMBOLS_HPP
#define LAMELAB_LAME_SYMBOLS_HPP

#include <Eigen/Dense>
#include <complex>
#include <utility>

namespace lamelab {

using Cplx = std::complex<double>;
using SymbolMatrix = Eigen::MatrixXcd;

// Denominators at or below this magnitude raise PoleError instead of
// returning huge values that would corrupt exponent fits downstream.
inline constexpr double kPoleThreshold = 1e-30;

struct LameParameters {
  double mu;
  double lambda;

  LameParameters(double mu_, double lambda_);
  double rho() const { return rho_; }
  double pressure_modulus() const { return lambda + 2.0 * mu; }

private:
  double rho_;  // (lambda + 2 mu) / mu, cached at construction
};

// Frequency variable with the splitting conventions used throughout:
// xi = (xi_1, xi') = (xi_1, xi_2, xi_bar), tau an alias for xi_1.
struct FrequencyPoint {
  Eigen::VectorXd xi;

  FrequencyPoint(Eigen::VectorXd v);
  int dim() const { return static_cast<int>(xi.size()); }
  double xi1() const { return xi[0]; }
  double tau() const { return xi[0]; }
  double xi2() const { return xi[1]; }
  Eigen::VectorXd xi_prime() const { return xi.tail(xi.size() - 1); }
  Eigen::VectorXd xi_bar() const { return xi.tail(xi.size() - 2); }
  double norm_sq() const { return xi.squaredNorm(); }
};

// L_z(xi) = (mu |xi|^2 - z) I + (lambda + mu) xi xi^t.
SymbolMatrix lame_matrix(const FrequencyPoint& xi, Cplx z, const LameParameters& par);

// Closed-form inverse of L_z(xi):
//   delta_jk / (mu|xi|^2 - z)
//   + (1/((lambda+2mu)|xi|^2 - z) - 1/(mu|xi|^2 - z)) xi_j xi_k / |xi|^2.
SymbolMatrix resolvent_symbol(const FrequencyPoint& xi, Cplx z, const LameParameters& par);

// Rank-one projector xi xi^t / |xi|^2.
SymbolMatrix leray_projector(const FrequencyPoint& xi);

// Scalar pair (s, p) with resolvent = s (I - Pi) + p Pi.
std::pair<Cplx, Cplx> helmholtz_factors(const FrequencyPoint& xi, Cplx z,
                                        const LameParameters& par);

// i xi_j / |xi| (0-based component index j).
Cplx riesz_symbol(int j, const FrequencyPoint& xi);

enum class ImagVariant { Raw, Normalized };

struct ImagSymbolValue {
  double total;       // I_delta = M + m
  double sphere;      // M_delta, singular on the unit sphere (raw variant)
  double shifted;     // m_delta, singular on the rho-scaled sphere (raw variant)
};

// Imaginary part of the reduced spectral-parameter symbol at z = 1 + i delta.
// Raw:        M = delta |xi'|^2 / ((( |xi|^2-1)^2 + delta^2) |xi|^2),
//             m = delta xi_1^2  / (((rho|xi|^2-1)^2 + delta^2) |xi|^2).
// Normalized: the two sphere roles swap (rescaling xi -> rho^{-1/2} xi).
ImagSymbolValue imag_symbol(const FrequencyPoint& xi, double delta, double rho,
                            ImagVariant variant);

// Sphere-graph geometry. psi(xi') = 1 - sqrt(1 - |xi'|^2) for |xi'| < 1;
// g(eta) = -eta / sqrt(1 + |eta|^2) solves eta + grad psi(g(eta)) = 0.
double graph_psi(const Eigen::VectorXd& xi_prime);
Eigen::VectorXd graph_psi_grad(const Eigen::VectorXd& xi_prime);
Eigen::VectorXd normal_map(const Eigen::VectorXd& eta);

// Reduced symbols after the slab change of variables xi_1 = tau + psi - 1:
//   a_delta(tau,xi') = delta / (tau^2 (tau + 2 psi - 2)^2 + delta^2)
//   b_delta(tau,xi') = rho^2 delta / ([tau(tau+2psi-2) + 1 - rho]^2 + (rho delta)^2)
//                      * |xi'|^2 / (tau + psi - 1)^2.
// Radial forms take r = |xi'| directly.
double reduced_a(double tau, double r, double delta);
double reduced_b(double tau, double r, double delta, double rho);
struct ReducedSymbols {
  double a;
  double b;
};
ReducedSymbols reduced_symbols(double tau, const Eigen::VectorXd& xi_prime, double delta,
                               double rho);

// (xi_1 + i) xi_2 / (|xi|^2 - 1 + 2 i xi_1)^2, singular on {xi_1=0, |xi|=1}.
Cplx carleman_symbol(const FrequencyPoint& xi);

// eta = xi + i v, eta^t eta = |xi|^2 - |v|^2 + 2 i xi . v.
Cplx conjugated_quadratic(const FrequencyPoint& xi, const Eigen::VectorXd& v);

// M_eta = mu (eta^t eta) I + (lambda + mu) eta eta^t and its closed-form
// inverse (the resolvent formula with xi -> eta, z -> 0). |v| must be 1.
SymbolMatrix conjugated_matrix(const FrequencyPoint& xi, const Eigen::VectorXd& v,
                               const LameParameters& par);
SymbolMatrix conjugated_inverse(const FrequencyPoint& xi, const Eigen::VectorXd& v,
                                const LameParameters& par);

// 1/(lambda+2mu) - 1/mu, the prefactor of the rank-one part of M_eta^{-1}.
double conjugated_offdiag_factor(const LameParameters& par);

// Slab half-width for the reduced symbols: min(1/8, |1-rho|/9), so that
// |1-rho| - 2 eps (2 + 2 eps) >= |1-rho|/2 on |tau| <= 2 eps.
double default_eps_circ(double rho);

}  // namespace lamelab

#endif
