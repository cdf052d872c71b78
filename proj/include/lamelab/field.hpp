#ifndef LAMELAB_FIELD_HPP
#define LAMELAB_FIELD_HPP

#include <complex>
#include <functional>
#include <vector>

#include "lamelab/grid.hpp"
#include "lamelab/lame_symbols.hpp"

namespace lamelab {

enum class FieldDomain { Space, Frequency };
enum class TransformDirection { Forward, Inverse };

// d complex component arrays sampled on a shared periodic grid. The Fourier
// pair follows the continuum convention
//   fhat(xi) = int e^{-i x.xi} f(x) dx,   f(x) = (2pi)^{-d} int e^{i x.xi} fhat,
// discretized with cell weights h^d forward and (dxi)^d/(2pi)^d backward, so
// inverse(forward(f)) = f to machine precision.
class VectorField {
public:
  VectorField(PeriodicGrid grid, int components, FieldDomain domain = FieldDomain::Space);

  const PeriodicGrid& grid() const { return grid_; }
  int components() const { return static_cast<int>(data_.size()); }
  FieldDomain domain() const { return domain_; }
  void set_domain(FieldDomain d) { domain_ = d; }

  std::vector<Cplx>& component(int j) { return data_[static_cast<std::size_t>(j)]; }
  const std::vector<Cplx>& component(int j) const { return data_[static_cast<std::size_t>(j)]; }

  // Samples component j from a pointwise function of the space position.
  void fill(int j, const std::function<Cplx(const Eigen::VectorXd&)>& f);

private:
  PeriodicGrid grid_;
  std::vector<std::vector<Cplx>> data_;
  FieldDomain domain_;
};

VectorField transform(const VectorField& f, TransformDirection dir);

using MatrixSymbol = std::function<SymbolMatrix(const FrequencyPoint&)>;
using ScalarSymbol = std::function<Cplx(const FrequencyPoint&)>;

// m(D) f: multiply componentwise by the matrix (or scalar) symbol on the
// frequency lattice. PoleError from the symbol is rethrown with advice to
// use the half-cell offset. The result lives in the domain of the input.
VectorField apply_multiplier(const VectorField& f, const MatrixSymbol& symbol);
VectorField apply_multiplier(const VectorField& f, const ScalarSymbol& symbol);

// Riemann-sum L^p norm, all components pooled (the l^p-in-components
// convention). p = inf gives the max over components and samples.
double lp_norm(const VectorField& f, double p);

// Lorentz norms from the decreasing rearrangement of pooled samples with
// equal cell weights. r = inf: sup_t t mu(|f|>t)^{1/q};
// r = 1: int_0^inf mu(|f|>t)^{1/q} dt (exact on step functions).
double lorentz_norm(const VectorField& f, double q, double r);

// Mask over grid points (shared across components), 1 = observed.
using GridMask = std::vector<std::uint8_t>;
GridMask full_mask(const PeriodicGrid& grid);
GridMask box_mask(const PeriodicGrid& grid, const std::vector<double>& half_widths);
double mask_measure(const PeriodicGrid& grid, const GridMask& mask);

// ||1_A m(D) f||_q / ||f||_p, a certified lower bound for ||m(D)||_{p->q}.
double restricted_ratio(const MatrixSymbol& symbol, const VectorField& f, double p, double q,
                        const GridMask& observation);
double restricted_ratio(const ScalarSymbol& symbol, const VectorField& f, double p, double q,
                        const GridMask& observation);

}  // namespace lamelab

#endif
