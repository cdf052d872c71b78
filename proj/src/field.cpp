#include "lamelab/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <numeric>

#include "lamelab/errors.hpp"

namespace lamelab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Executes one complex DFT over all axes of `data` (row-major, last axis
// contiguous). FFTW_ESTIMATE keeps planning deterministic.
void run_fft(const PeriodicGrid& g, std::vector<Cplx>& data, int sign) {
  std::vector<int> dims(static_cast<std::size_t>(g.dim()));
  for (int k = 0; k < g.dim(); ++k) dims[static_cast<std::size_t>(k)] = g.points(k);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(g.dim(), dims.data(), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw ComputeError("FFTW failed to build a plan");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// Applies prod_k factor[k][idx_k] to every sample.
void apply_axis_factors(const PeriodicGrid& g, std::vector<Cplx>& data,
                        const std::vector<std::vector<Cplx>>& factor) {
  const std::int64_t total = g.total_points();
  std::vector<int> idx(static_cast<std::size_t>(g.dim()), 0);
  for (std::int64_t f = 0; f < total; ++f) {
    Cplx c(1.0, 0.0);
    for (int k = 0; k < g.dim(); ++k) c *= factor[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    data[static_cast<std::size_t>(f)] *= c;
    for (int k = g.dim() - 1; k >= 0; --k) {
      auto ku = static_cast<std::size_t>(k);
      if (++idx[ku] < g.points(k)) break;
      idx[ku] = 0;
    }
  }
}

const double kPi = std::acos(-1.0);

}  // namespace

VectorField::VectorField(PeriodicGrid grid, int components, FieldDomain domain)
    : grid_(std::move(grid)), domain_(domain) {
  if (components < 1) throw DomainError("vector fields need at least one component");
  data_.assign(static_cast<std::size_t>(components),
               std::vector<Cplx>(static_cast<std::size_t>(grid_.total_points()), Cplx{}));
}

void VectorField::fill(int j, const std::function<Cplx(const Eigen::VectorXd&)>& f) {
  if (domain_ != FieldDomain::Space) throw DomainError("fill expects a space-domain field");
  auto& comp = component(j);
  std::vector<int> idx;
  Eigen::VectorXd x(grid_.dim());
  for (std::int64_t p = 0; p < grid_.total_points(); ++p) {
    grid_.unflatten(p, idx);
    for (int k = 0; k < grid_.dim(); ++k) x[k] = grid_.coordinate(k, idx[static_cast<std::size_t>(k)]);
    comp[static_cast<std::size_t>(p)] = f(x);
  }
}

VectorField transform(const VectorField& f, TransformDirection dir) {
  const PeriodicGrid& g = f.grid();
  const bool forward = dir == TransformDirection::Forward;
  if (forward && f.domain() != FieldDomain::Space)
    throw DomainError("forward transform expects a space-domain field");
  if (!forward && f.domain() != FieldDomain::Frequency)
    throw DomainError("inverse transform expects a frequency-domain field");

  const double a = g.half_offset() ? 0.5 : 0.0;
  std::vector<std::vector<Cplx>> pre(static_cast<std::size_t>(g.dim()));
  std::vector<std::vector<Cplx>> post(static_cast<std::size_t>(g.dim()));
  double scale = 1.0;
  for (int k = 0; k < g.dim(); ++k) {
    const int nk = g.points(k);
    auto ku = static_cast<std::size_t>(k);
    pre[ku].resize(static_cast<std::size_t>(nk));
    post[ku].resize(static_cast<std::size_t>(nk));
    for (int j = 0; j < nk; ++j) {
      double sample_phase = -2.0 * kPi * j * a / nk;
      double bin_phase = kPi * (g.freq_integer(k, j) + a);
      if (forward) {
        pre[ku][static_cast<std::size_t>(j)] = std::polar(1.0, sample_phase);
        post[ku][static_cast<std::size_t>(j)] = std::polar(1.0, bin_phase);
      } else {
        pre[ku][static_cast<std::size_t>(j)] = std::polar(1.0, -bin_phase);
        post[ku][static_cast<std::size_t>(j)] = std::polar(1.0, -sample_phase);
      }
    }
    scale *= forward ? g.spacing(k) : 1.0 / (2.0 * g.half_length(k));
  }

  VectorField out(g, f.components(), forward ? FieldDomain::Frequency : FieldDomain::Space);
  for (int j = 0; j < f.components(); ++j) {
    std::vector<Cplx> work = f.component(j);
    if (a != 0.0 || !forward) apply_axis_factors(g, work, pre);
    run_fft(g, work, forward ? FFTW_FORWARD : FFTW_BACKWARD);
    if (a != 0.0 || forward) apply_axis_factors(g, work, post);
    for (auto& v : work) v *= scale;
    out.component(j) = std::move(work);
  }
  return out;
}

namespace {

template <typename Apply>
VectorField multiply_on_lattice(const VectorField& f, Apply&& apply) {
  const bool was_space = f.domain() == FieldDomain::Space;
  VectorField hat = was_space ? transform(f, TransformDirection::Forward) : f;
  const PeriodicGrid& g = hat.grid();
  const int d = g.dim();
  std::vector<int> idx;
  Eigen::VectorXd xi(d);
  Eigen::VectorXcd in(hat.components()), out_vec(hat.components());
  try {
    for (std::int64_t p = 0; p < g.total_points(); ++p) {
      g.unflatten(p, idx);
      for (int k = 0; k < d; ++k) xi[k] = g.frequency(k, idx[static_cast<std::size_t>(k)]);
      for (int j = 0; j < hat.components(); ++j) in[j] = hat.component(j)[static_cast<std::size_t>(p)];
      apply(FrequencyPoint(xi), in, out_vec);
      for (int j = 0; j < hat.components(); ++j) hat.component(j)[static_cast<std::size_t>(p)] = out_vec[j];
    }
  } catch (const PoleError& e) {
    throw ComputeError(std::string(e.what()) +
                       " (symbol pole on a lattice point; enable the half-cell frequency offset)");
  }
  return was_space ? transform(hat, TransformDirection::Inverse) : hat;
}

}  // namespace

VectorField apply_multiplier(const VectorField& f, const MatrixSymbol& symbol) {
  return multiply_on_lattice(f, [&](const FrequencyPoint& xi, const Eigen::VectorXcd& in,
                                    Eigen::VectorXcd& out) {
    SymbolMatrix s = symbol(xi);
    if (s.rows() != in.size() || s.cols() != in.size())
      throw DomainError("matrix symbol dimension does not match field components");
    out = s * in;
  });
}

VectorField apply_multiplier(const VectorField& f, const ScalarSymbol& symbol) {
  return multiply_on_lattice(f, [&](const FrequencyPoint& xi, const Eigen::VectorXcd& in,
                                    Eigen::VectorXcd& out) { out = symbol(xi) * in; });
}

double lp_norm(const VectorField& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (int j = 0; j < f.components(); ++j)
      for (const auto& v : f.component(j)) m = std::max(m, std::abs(v));
    return m;
  }
  const double w = f.domain() == FieldDomain::Space ? f.grid().cell_measure()
                                                    : f.grid().freq_cell_measure();
  double acc = 0.0;
  for (int j = 0; j < f.components(); ++j)
    for (const auto& v : f.component(j)) acc += std::pow(std::abs(v), p);
  return std::pow(acc * w, 1.0 / p);
}

double lorentz_norm(const VectorField& f, double q, double r) {
  if (!(q >= 1.0) || std::isinf(q)) throw DomainError("lorentz_norm requires 1 <= q < inf");
  if (r != 1.0 && !std::isinf(r)) throw DomainError("lorentz_norm supports r in {1, inf}");
  const double w = f.domain() == FieldDomain::Space ? f.grid().cell_measure()
                                                    : f.grid().freq_cell_measure();
  std::vector<double> mags;
  mags.reserve(static_cast<std::size_t>(f.components()) *
               static_cast<std::size_t>(f.grid().total_points()));
  for (int j = 0; j < f.components(); ++j)
    for (const auto& v : f.component(j)) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  if (std::isinf(r)) {
    double best = 0.0;
    for (std::size_t k = 0; k < mags.size(); ++k) {
      if (mags[k] == 0.0) break;
      best = std::max(best, mags[k] * std::pow(w * static_cast<double>(k + 1), 1.0 / q));
    }
    return best;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    double next = (k + 1 < mags.size()) ? mags[k + 1] : 0.0;
    if (mags[k] == 0.0) break;
    acc += std::pow(w * static_cast<double>(k + 1), 1.0 / q) * (mags[k] - next);
  }
  return acc;
}

GridMask full_mask(const PeriodicGrid& grid) {
  return GridMask(static_cast<std::size_t>(grid.total_points()), 1);
}

GridMask box_mask(const PeriodicGrid& grid, const std::vector<double>& half_widths) {
  if (static_cast<int>(half_widths.size()) != grid.dim())
    throw DomainError("box mask needs one half-width per axis");
  GridMask mask(static_cast<std::size_t>(grid.total_points()), 0);
  std::vector<int> idx;
  for (std::int64_t p = 0; p < grid.total_points(); ++p) {
    grid.unflatten(p, idx);
    bool in = true;
    for (int k = 0; k < grid.dim() && in; ++k)
      in = std::abs(grid.coordinate(k, idx[static_cast<std::size_t>(k)])) <=
           half_widths[static_cast<std::size_t>(k)];
    mask[static_cast<std::size_t>(p)] = in ? 1 : 0;
  }
  return mask;
}

double mask_measure(const PeriodicGrid& grid, const GridMask& mask) {
  std::int64_t count = 0;
  for (auto m : mask) count += m;
  return static_cast<double>(count) * grid.cell_measure();
}

namespace {

double masked_lq(const VectorField& f, double q, const GridMask& mask) {
  VectorField masked = f;
  for (int j = 0; j < masked.components(); ++j) {
    auto& comp = masked.component(j);
    for (std::size_t p = 0; p < comp.size(); ++p)
      if (!mask[p]) comp[p] = Cplx{};
  }
  return lp_norm(masked, q);
}

template <typename Symbol>
double ratio_impl(const Symbol& symbol, const VectorField& f, double p, double q,
                  const GridMask& mask) {
  if (mask.size() != static_cast<std::size_t>(f.grid().total_points()))
    throw DomainError("observation mask does not match the grid");
  double denom = lp_norm(f, p);
  if (denom == 0.0) throw DomainError("restricted_ratio: zero test field");
  VectorField tf = apply_multiplier(f, symbol);
  return masked_lq(tf, q, mask) / denom;
}

}  // namespace

double restricted_ratio(const MatrixSymbol& symbol, const VectorField& f, double p, double q,
                        const GridMask& observation) {
  return ratio_impl(symbol, f, p, q, observation);
}

double restricted_ratio(const ScalarSymbol& symbol, const VectorField& f, double p, double q,
                        const GridMask& observation) {
  return ratio_impl(symbol, f, p, q, observation);
}

}  // namespace lamelab
