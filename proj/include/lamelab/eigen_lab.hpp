#ifndef LAMELAB_EIGEN_LAB_HPP
#define LAMELAB_EIGEN_LAB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lamelab/exponent_geometry.hpp"
#include "lamelab/field.hpp"

namespace lamelab {

// Matrix-valued potential sampled on the grid, d^2 entries stored row-major
// (entry(j,k) multiplies component k into component j).
class PotentialField {
public:
  PotentialField(PeriodicGrid grid, int d);

  const PeriodicGrid& grid() const { return grid_; }
  int dim() const { return d_; }
  std::vector<Cplx>& entry(int j, int k) { return data_[static_cast<std::size_t>(j * d_ + k)]; }
  const std::vector<Cplx>& entry(int j, int k) const {
    return data_[static_cast<std::size_t>(j * d_ + k)];
  }

private:
  PeriodicGrid grid_;
  int d_;
  std::vector<std::vector<Cplx>> data_;
};

// (sum_{j,k} ||V_jk||_s^s)^{1/s} with Riemann-sum entry norms; s = inf takes
// the max of the entries' sup norms.
double potential_norm(const PotentialField& v, double s);

// t / (C ell d^{1 - 1/p + 1/q}): the bound on ||V||_{pq/(q-p)} under which
// the eigenvalue exclusion applies. ell >= 1 is required on the critical
// line 1/p - 1/q = 2/d.
double smallness_threshold(int d, double p, double q, double ell, double c_user, double t);

struct HolderChain {
  double lhs = 0.0;  // ||V u||_p
  double rhs = 0.0;  // d^{1-1/p+1/q} ||V||_{pq/(q-p)} ||u||_q
};
HolderChain holder_chain_check(const PotentialField& v, const VectorField& u, double p, double q);

// (V u)_j = sum_k V_jk u_k, pointwise on the grid.
VectorField apply_potential(const PotentialField& v, const VectorField& u);

// u -> -Delta^* u + V u with the elastic part exact in frequency.
VectorField apply_lame_operator(const VectorField& u, const LameParameters& par,
                                const PotentialField* v);

// Dense matrix of the operator in the frequency basis (block-diagonal elastic
// part plus the potential convolution). Throws above the dense cap.
Eigen::MatrixXcd assemble_operator(const PeriodicGrid& grid, const LameParameters& par,
                                   const PotentialField* v, std::int64_t dense_cap = 6000);

// All eigenvalues of a dense complex matrix (Hermitian input is detected and
// routed through the symmetric solver).
std::vector<Cplx> dense_spectrum(const Eigen::MatrixXcd& m);

// Closed-form spectrum of the unperturbed operator on the grid lattice:
// mu |xi|^2 with multiplicity d-1 and (lambda+2mu) |xi|^2, per lattice point.
std::vector<Cplx> lattice_spectrum(const PeriodicGrid& grid, const LameParameters& par);

// k eigenvalues nearest `center` by shift-invert Arnoldi with the exact
// unperturbed resolvent as preconditioner. Works matrix-free at any size.
struct WindowEigenvalue {
  Cplx value;
  double residual = 0.0;
  bool converged = false;
};
std::vector<WindowEigenvalue> window_spectrum(const PeriodicGrid& grid, const LameParameters& par,
                                              const PotentialField* v, Cplx center, int count,
                                              int krylov_dim = 80);

// Deterministic random potential: smooth-envelope complex Gaussian entries
// scaled so that potential_norm(V, s) == target.
PotentialField random_potential(const PeriodicGrid& grid, int d, std::uint64_t seed, double s,
                                double target_norm);

struct EigenEntry {
  Cplx value;
  std::string flag;  // "on_ray" | "in_Z" | "outside_Z"
  std::optional<double> kappa_value;
  bool converged = true;
};

struct EigenReport {
  int d = 0;
  double mu = 0.0, lambda = 0.0;
  ExponentPair exponents{Rat(1, 2), Rat(1, 2)};
  double ell = 0.0, t = 0.0, c_user = 0.0;
  double potential_norm_s = 0.0;
  double threshold = 0.0;
  bool hypothesis_satisfied = false;
  double on_ray_tolerance = 1e-8;
  std::vector<EigenEntry> entries;
  std::string note;
};

// Spectrum of -Delta^* + V on the grid, flagged against Z_{p,q}(ell).
// A desk-scale demonstration: grid eigenvalues approximate the continuum
// L^2 spectrum, so the report records, it does not certify.
EigenReport eigen_region_report(const PeriodicGrid& grid, const LameParameters& par,
                                const PotentialField* v, const ExponentPair& pq, double ell,
                                double t, double c_user, std::int64_t dense_cap = 6000);

}  // namespace lamelab

#endif
