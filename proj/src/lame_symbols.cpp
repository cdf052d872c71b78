#include "lamelab/lame_symbols.hpp"

#include <cmath>

#include "lamelab/errors.hpp"

namespace lamelab {

namespace {

void require_nonzero_frequency(const FrequencyPoint& xi) {
  if (xi.norm_sq() == 0.0) throw PoleError("symbol is singular at xi = 0");
}

void require_denominator(Cplx den, const char* which) {
  if (std::abs(den) <= kPoleThreshold)
    throw PoleError(std::string("symbol pole: vanishing denominator in ") + which);
}

void require_unit(const Eigen::VectorXd& v) {
  if (std::abs(v.norm() - 1.0) > 1e-12)
    throw DomainError("conjugation direction v must be a unit vector");
}

}  // namespace

LameParameters::LameParameters(double mu_, double lambda_) : mu(mu_), lambda(lambda_) {
  if (!(mu > 0.0)) throw DomainError("Lame parameters require mu > 0");
  if (!(lambda + 2.0 * mu > 0.0)) throw DomainError("Lame parameters require lambda + 2 mu > 0");
  rho_ = (lambda + 2.0 * mu) / mu;
}

FrequencyPoint::FrequencyPoint(Eigen::VectorXd v) : xi(std::move(v)) {
  if (xi.size() < 2) throw DomainError("frequency points need dimension >= 2");
}

SymbolMatrix lame_matrix(const FrequencyPoint& xi, Cplx z, const LameParameters& par) {
  const int d = xi.dim();
  SymbolMatrix out = (par.mu * xi.norm_sq() - z) * SymbolMatrix::Identity(d, d);
  out += (par.lambda + par.mu) * (xi.xi * xi.xi.transpose()).cast<Cplx>();
  return out;
}

SymbolMatrix resolvent_symbol(const FrequencyPoint& xi, Cplx z, const LameParameters& par) {
  require_nonzero_frequency(xi);
  const double n2 = xi.norm_sq();
  const Cplx shear = par.mu * n2 - z;
  const Cplx press = par.pressure_modulus() * n2 - z;
  require_denominator(shear, "mu |xi|^2 - z");
  require_denominator(press, "(lambda+2mu) |xi|^2 - z");
  const int d = xi.dim();
  const Cplx diff = 1.0 / press - 1.0 / shear;
  SymbolMatrix out = (1.0 / shear) * SymbolMatrix::Identity(d, d);
  out += (diff / n2) * (xi.xi * xi.xi.transpose()).cast<Cplx>();
  return out;
}

SymbolMatrix leray_projector(const FrequencyPoint& xi) {
  require_nonzero_frequency(xi);
  return ((xi.xi * xi.xi.transpose()) / xi.norm_sq()).cast<Cplx>();
}

std::pair<Cplx, Cplx> helmholtz_factors(const FrequencyPoint& xi, Cplx z,
                                        const LameParameters& par) {
  require_nonzero_frequency(xi);
  const double n2 = xi.norm_sq();
  const Cplx shear = par.mu * n2 - z;
  const Cplx press = par.pressure_modulus() * n2 - z;
  require_denominator(shear, "mu |xi|^2 - z");
  require_denominator(press, "(lambda+2mu) |xi|^2 - z");
  return {1.0 / shear, 1.0 / press};
}

Cplx riesz_symbol(int j, const FrequencyPoint& xi) {
  require_nonzero_frequency(xi);
  if (j < 0 || j >= xi.dim()) throw DomainError("Riesz component index out of range");
  return Cplx(0.0, xi.xi[j] / std::sqrt(xi.norm_sq()));
}

ImagSymbolValue imag_symbol(const FrequencyPoint& xi, double delta, double rho,
                            ImagVariant variant) {
  require_nonzero_frequency(xi);
  if (!(delta > 0.0)) throw DomainError("imag_symbol requires delta > 0");
  if (rho == 1.0)
    throw DomainError("imag_symbol requires rho != 1 (two distinct wave speeds)");
  const double n2 = xi.norm_sq();
  const double xp2 = xi.xi_prime().squaredNorm();
  const double x12 = xi.xi1() * xi.xi1();
  double sphere_arg, shifted_arg;
  if (variant == ImagVariant::Raw) {
    sphere_arg = n2 - 1.0;
    shifted_arg = rho * n2 - 1.0;
  } else {
    sphere_arg = n2 / rho - 1.0;
    shifted_arg = n2 - 1.0;
  }
  ImagSymbolValue v{};
  v.sphere = delta / (sphere_arg * sphere_arg + delta * delta) * (xp2 / n2);
  v.shifted = delta / (shifted_arg * shifted_arg + delta * delta) * (x12 / n2);
  v.total = v.sphere + v.shifted;
  return v;
}

double graph_psi(const Eigen::VectorXd& xi_prime) {
  const double r2 = xi_prime.squaredNorm();
  if (r2 >= 1.0) throw DomainError("graph_psi requires |xi'| < 1");
  return 1.0 - std::sqrt(1.0 - r2);
}

Eigen::VectorXd graph_psi_grad(const Eigen::VectorXd& xi_prime) {
  const double r2 = xi_prime.squaredNorm();
  if (r2 >= 1.0) throw DomainError("graph_psi_grad requires |xi'| < 1");
  return xi_prime / std::sqrt(1.0 - r2);
}

Eigen::VectorXd normal_map(const Eigen::VectorXd& eta) {
  return -eta / std::sqrt(1.0 + eta.squaredNorm());
}

namespace {
double psi_radial(double r) {
  if (std::abs(r) >= 1.0) throw DomainError("reduced symbols require |xi'| < 1");
  return 1.0 - std::sqrt(1.0 - r * r);
}
}  // namespace

double reduced_a(double tau, double r, double delta) {
  const double q = tau * (tau + 2.0 * psi_radial(r) - 2.0);
  return delta / (q * q + delta * delta);
}

double reduced_b(double tau, double r, double delta, double rho) {
  const double psi = psi_radial(r);
  const double lin = tau + psi - 1.0;
  if (std::abs(lin) <= kPoleThreshold)
    throw PoleError("reduced b_delta: xi_1-factor (tau + psi - 1) vanishes");
  const double q = tau * (tau + 2.0 * psi - 2.0) + 1.0 - rho;
  return rho * rho * delta / (q * q + rho * rho * delta * delta) * (r * r) / (lin * lin);
}

ReducedSymbols reduced_symbols(double tau, const Eigen::VectorXd& xi_prime, double delta,
                               double rho) {
  const double r = xi_prime.norm();
  return {reduced_a(tau, r, delta), reduced_b(tau, r, delta, rho)};
}

Cplx carleman_symbol(const FrequencyPoint& xi) {
  const Cplx w(xi.norm_sq() - 1.0, 2.0 * xi.xi1());
  const Cplx w2 = w * w;
  if (std::abs(w2) <= kPoleThreshold)
    throw PoleError("carleman symbol pole: xi on the singular sphere {xi_1=0, |xi|=1}");
  return Cplx(xi.xi1(), 1.0) * xi.xi2() / w2;
}

Cplx conjugated_quadratic(const FrequencyPoint& xi, const Eigen::VectorXd& v) {
  if (v.size() != xi.xi.size()) throw DomainError("v and xi must share a dimension");
  return Cplx(xi.norm_sq() - v.squaredNorm(), 2.0 * xi.xi.dot(v));
}

SymbolMatrix conjugated_matrix(const FrequencyPoint& xi, const Eigen::VectorXd& v,
                               const LameParameters& par) {
  require_unit(v);
  const int d = xi.dim();
  Eigen::VectorXcd eta = xi.xi.cast<Cplx>() + Cplx(0.0, 1.0) * v.cast<Cplx>();
  const Cplx w = conjugated_quadratic(xi, v);
  SymbolMatrix out = par.mu * w * SymbolMatrix::Identity(d, d);
  out += (par.lambda + par.mu) * (eta * eta.transpose());
  return out;
}

SymbolMatrix conjugated_inverse(const FrequencyPoint& xi, const Eigen::VectorXd& v,
                                const LameParameters& par) {
  require_unit(v);
  const Cplx w = conjugated_quadratic(xi, v);
  require_denominator(par.mu * w, "mu eta^t eta");
  require_denominator(par.pressure_modulus() * w, "(lambda+2mu) eta^t eta");
  const int d = xi.dim();
  Eigen::VectorXcd eta = xi.xi.cast<Cplx>() + Cplx(0.0, 1.0) * v.cast<Cplx>();
  const Cplx diff = 1.0 / (par.pressure_modulus() * w) - 1.0 / (par.mu * w);
  SymbolMatrix out = (1.0 / (par.mu * w)) * SymbolMatrix::Identity(d, d);
  out += (diff / w) * (eta * eta.transpose());
  return out;
}

double conjugated_offdiag_factor(const LameParameters& par) {
  return 1.0 / par.pressure_modulus() - 1.0 / par.mu;
}

double default_eps_circ(double rho) {
  if (rho == 1.0) throw DomainError("eps_circ undefined at rho = 1");
  // the /9 keeps |1-rho| - 2 eps (2 + 2 eps) >= |1-rho|/2 exactly, for every
  // rho (an /8 misses the margin by the quadratic term)
  return std::min(0.125, std::abs(1.0 - rho) / 9.0);
}

}  // namespace lamelab
