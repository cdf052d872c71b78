#include "lamelab/eigen_lab.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lamelab/errors.hpp"

namespace lamelab {

PotentialField::PotentialField(PeriodicGrid grid, int d) : grid_(std::move(grid)), d_(d) {
  if (d < 1) throw DomainError("potential needs d >= 1");
  if (grid_.dim() != d) throw DomainError("potential grid dimension mismatch");
  data_.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d),
               std::vector<Cplx>(static_cast<std::size_t>(grid_.total_points()), Cplx{}));
}

double potential_norm(const PotentialField& v, double s) {
  if (!(s >= 1.0)) throw DomainError("potential_norm requires s >= 1");
  const int d = v.dim();
  if (std::isinf(s)) {
    double best = 0.0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (const auto& val : v.entry(j, k)) best = std::max(best, std::abs(val));
    return best;
  }
  const double w = v.grid().cell_measure();
  double acc = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (const auto& val : v.entry(j, k)) acc += std::pow(std::abs(val), s);
  return std::pow(acc * w, 1.0 / s);
}

double smallness_threshold(int d, double p, double q, double ell, double c_user, double t) {
  if (d < 2) throw DomainError("smallness threshold needs d >= 2");
  if (!(t > 0.0) || !(t < 1.0)) throw DomainError("smallness threshold needs t in (0,1)");
  if (!(ell > 0.0)) throw DomainError("smallness threshold needs ell > 0");
  if (!(c_user > 0.0)) throw DomainError("smallness threshold needs C > 0");
  double pinv = std::isinf(p) ? 0.0 : 1.0 / p;
  double qinv = std::isinf(q) ? 0.0 : 1.0 / q;
  if (std::abs(pinv - qinv - 2.0 / d) < 1e-12 && ell < 1.0)
    throw DomainError("on the line 1/p - 1/q = 2/d the threshold requires ell >= 1");
  return t / (c_user * ell * std::pow(static_cast<double>(d), 1.0 - pinv + qinv));
}

VectorField apply_potential(const PotentialField& v, const VectorField& u) {
  if (!(v.grid() == u.grid()) || v.dim() != u.components())
    throw DomainError("potential and field shapes do not match");
  const int d = v.dim();
  VectorField out(u.grid(), d, u.domain());
  const auto n = static_cast<std::size_t>(u.grid().total_points());
  for (int j = 0; j < d; ++j) {
    auto& oj = out.component(j);
    for (int k = 0; k < d; ++k) {
      const auto& vjk = v.entry(j, k);
      const auto& uk = u.component(k);
      for (std::size_t p = 0; p < n; ++p) oj[p] += vjk[p] * uk[p];
    }
  }
  return out;
}

VectorField apply_lame_operator(const VectorField& u, const LameParameters& par,
                                const PotentialField* v) {
  const int d = u.grid().dim();
  VectorField elastic = apply_multiplier(u, MatrixSymbol([par, d](const FrequencyPoint& xi) {
                                           return lame_matrix(xi, Cplx(0.0, 0.0), par);
                                         }));
  if (v == nullptr) return elastic;
  VectorField pot = apply_potential(*v, u);
  for (int j = 0; j < d; ++j) {
    auto& ej = elastic.component(j);
    const auto& pj = pot.component(j);
    for (std::size_t p = 0; p < ej.size(); ++p) ej[p] += pj[p];
  }
  return elastic;
}

Eigen::MatrixXcd assemble_operator(const PeriodicGrid& grid, const LameParameters& par,
                                   const PotentialField* v, std::int64_t dense_cap) {
  const int d = grid.dim();
  const std::int64_t npts = grid.total_points();
  const std::int64_t size = npts * d;
  if (size > dense_cap)
    throw DomainError("dense operator size " + std::to_string(size) + " exceeds the cap " +
                      std::to_string(dense_cap) + "; use the matrix-free window path");

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  // Elastic part: exact d x d blocks per lattice point.
  std::vector<int> idx;
  Eigen::VectorXd xi(d);
  for (std::int64_t p = 0; p < npts; ++p) {
    grid.unflatten(p, idx);
    for (int k = 0; k < d; ++k) xi[k] = grid.frequency(k, idx[static_cast<std::size_t>(k)]);
    m.block(p * d, p * d, d, d) = lame_matrix(FrequencyPoint(xi), Cplx(0.0, 0.0), par);
  }
  if (v == nullptr) return m;

  // Potential part: columns of the frequency-basis multiplication operator.
  for (std::int64_t col_pt = 0; col_pt < npts; ++col_pt) {
    for (int k = 0; k < d; ++k) {
      VectorField basis(grid, d, FieldDomain::Frequency);
      basis.component(k)[static_cast<std::size_t>(col_pt)] = Cplx(1.0, 0.0);
      VectorField space = transform(basis, TransformDirection::Inverse);
      VectorField vu = apply_potential(*v, space);
      VectorField hat = transform(vu, TransformDirection::Forward);
      for (int j = 0; j < d; ++j) {
        const auto& comp = hat.component(j);
        for (std::int64_t row_pt = 0; row_pt < npts; ++row_pt)
          m(row_pt * d + j, col_pt * d + k) += comp[static_cast<std::size_t>(row_pt)];
      }
    }
  }
  return m;
}

std::vector<Cplx> dense_spectrum(const Eigen::MatrixXcd& m) {
  const auto n = static_cast<lapack_int>(m.rows());
  if (m.cols() != m.rows()) throw DomainError("dense_spectrum needs a square matrix");
  double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  const bool hermitian = (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;

  std::vector<Cplx> out(static_cast<std::size_t>(n));
  if (hermitian) {
    Eigen::MatrixXcd a = 0.5 * (m + m.adjoint());
    std::vector<double> w(static_cast<std::size_t>(n));
    lapack_int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0) throw ComputeError("zheev failed with info " + std::to_string(info));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Cplx(w[i], 0.0);
  } else {
    Eigen::MatrixXcd a = m;
    std::vector<Cplx> w(static_cast<std::size_t>(n));
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr,
                                    1, nullptr, 1);
    if (info != 0) throw ComputeError("zgeev failed with info " + std::to_string(info));
    out = std::move(w);
  }
  std::sort(out.begin(), out.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

std::vector<Cplx> lattice_spectrum(const PeriodicGrid& grid, const LameParameters& par) {
  std::vector<Cplx> out;
  std::vector<int> idx;
  const int d = grid.dim();
  for (std::int64_t p = 0; p < grid.total_points(); ++p) {
    grid.unflatten(p, idx);
    double n2 = 0.0;
    for (int k = 0; k < d; ++k) {
      double f = grid.frequency(k, idx[static_cast<std::size_t>(k)]);
      n2 += f * f;
    }
    for (int k = 0; k < d - 1; ++k) out.emplace_back(par.mu * n2, 0.0);
    out.emplace_back(par.pressure_modulus() * n2, 0.0);
  }
  std::sort(out.begin(), out.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

namespace {

using DenseVec = Eigen::VectorXcd;

DenseVec field_to_vec(const VectorField& f) {
  const int d = f.components();
  const auto npts = static_cast<std::int64_t>(f.grid().total_points());
  DenseVec v(npts * d);
  for (std::int64_t p = 0; p < npts; ++p)
    for (int j = 0; j < d; ++j) v[p * d + j] = f.component(j)[static_cast<std::size_t>(p)];
  return v;
}

VectorField vec_to_field(const PeriodicGrid& g, int d, const DenseVec& v, FieldDomain dom) {
  VectorField f(g, d, dom);
  const auto npts = static_cast<std::int64_t>(g.total_points());
  for (std::int64_t p = 0; p < npts; ++p)
    for (int j = 0; j < d; ++j) f.component(j)[static_cast<std::size_t>(p)] = v[p * d + j];
  return f;
}

}  // namespace

std::vector<WindowEigenvalue> window_spectrum(const PeriodicGrid& grid, const LameParameters& par,
                                              const PotentialField* v, Cplx center, int count,
                                              int krylov_dim) {
  const int d = grid.dim();
  if (count < 1) throw DomainError("window_spectrum needs count >= 1");
  if (center.imag() == 0.0 && center.real() >= 0.0)
    throw DomainError("window center must lie off the ray [0,inf) (it shifts the resolvent)");
  const auto npts = static_cast<std::int64_t>(grid.total_points());
  const std::int64_t size = npts * d;
  krylov_dim = static_cast<int>(std::min<std::int64_t>(krylov_dim, size));
  count = std::min<int>(count, krylov_dim);

  // Preconditioned shift-invert: (A - center)^{-1} b by Neumann iteration
  // x_{m+1} = R (b - V x_m), R the exact unperturbed resolvent at `center`.
  auto resolvent_apply = [&](const VectorField& fld) {
    return apply_multiplier(fld, MatrixSymbol([par, center](const FrequencyPoint& xi) {
                              return resolvent_symbol(xi, center, par);
                            }));
  };
  auto shift_invert = [&](const DenseVec& b) {
    VectorField bf = vec_to_field(grid, d, b, FieldDomain::Frequency);
    VectorField bspace = transform(bf, TransformDirection::Inverse);
    VectorField x = resolvent_apply(bspace);
    if (v != nullptr) {
      for (int it = 0; it < 200; ++it) {
        VectorField vx = apply_potential(*v, x);
        VectorField rhs(grid, d, FieldDomain::Space);
        for (int j = 0; j < d; ++j) {
          auto& rj = rhs.component(j);
          const auto& bj = bspace.component(j);
          const auto& vj = vx.component(j);
          for (std::size_t p2 = 0; p2 < rj.size(); ++p2) rj[p2] = bj[p2] - vj[p2];
        }
        VectorField xn = resolvent_apply(rhs);
        double diff = 0.0, scale = 0.0;
        for (int j = 0; j < d; ++j)
          for (std::size_t p2 = 0; p2 < xn.component(j).size(); ++p2) {
            diff += std::norm(xn.component(j)[p2] - x.component(j)[p2]);
            scale += std::norm(xn.component(j)[p2]);
          }
        x = std::move(xn);
        if (diff <= 1e-24 * std::max(scale, 1e-300)) break;
        if (it == 199)
          throw ComputeError("shift-invert iteration did not converge; potential too large");
      }
    }
    return field_to_vec(transform(x, TransformDirection::Forward));
  };

  // Arnoldi on the shift-inverted map.
  Eigen::MatrixXcd basis(size, krylov_dim + 1);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(krylov_dim + 1, krylov_dim);
  DenseVec v0 = DenseVec::Ones(size);
  for (std::int64_t i = 0; i < size; ++i)
    v0[i] += Cplx(0.0, 0.3 + 0.1 * std::cos(static_cast<double>(i)));
  basis.col(0) = v0 / v0.norm();
  int built = 0;
  for (int j = 0; j < krylov_dim; ++j) {
    DenseVec w = shift_invert(basis.col(j));
    for (int i = 0; i <= j; ++i) {
      h(i, j) = basis.col(i).adjoint() * w;
      w -= h(i, j) * basis.col(i);
    }
    for (int i = 0; i <= j; ++i) {  // one re-orthogonalization pass
      Cplx c = basis.col(i).adjoint() * w;
      h(i, j) += c;
      w -= c * basis.col(i);
    }
    h(j + 1, j) = w.norm();
    built = j + 1;
    if (std::abs(h(j + 1, j)) < 1e-14) break;
    basis.col(j + 1) = w / h(j + 1, j);
  }

  Eigen::MatrixXcd hm = h.topLeftCorner(built, built);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hm);
  if (es.info() != Eigen::Success) throw ComputeError("Arnoldi projection eigensolve failed");

  std::vector<WindowEigenvalue> all;
  for (int i = 0; i < built; ++i) {
    Cplx theta = es.eigenvalues()[i];
    if (std::abs(theta) < 1e-14) continue;
    WindowEigenvalue we;
    we.value = center + 1.0 / theta;
    double tail = built < h.rows() ? std::abs(h(built, built - 1)) : 0.0;
    we.residual = tail * std::abs(es.eigenvectors()(built - 1, i)) / std::abs(theta);
    we.converged = we.residual < 1e-8;
    all.push_back(we);
  }
  std::sort(all.begin(), all.end(), [center](const WindowEigenvalue& a, const WindowEigenvalue& b) {
    return std::abs(a.value - center) < std::abs(b.value - center);
  });
  if (static_cast<int>(all.size()) > count) all.resize(static_cast<std::size_t>(count));
  return all;
}

PotentialField random_potential(const PeriodicGrid& grid, int d, std::uint64_t seed, double s,
                                double target_norm) {
  PotentialField v(grid, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<int> idx;
  const auto npts = static_cast<std::size_t>(grid.total_points());
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      auto& e = v.entry(j, k);
      for (std::size_t p = 0; p < npts; ++p) {
        grid.unflatten(static_cast<std::int64_t>(p), idx);
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
          double x = grid.coordinate(a, idx[static_cast<std::size_t>(a)]);
          r2 += x * x;
        }
        double envelope = std::exp(-0.25 * r2);
        e[p] = Cplx(gauss(rng), gauss(rng)) * envelope;
      }
    }
  double now = potential_norm(v, s);
  if (now == 0.0) throw ComputeError("random potential degenerated to zero");
  double f = target_norm / now;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (auto& val : v.entry(j, k)) val *= f;
  return v;
}

EigenReport eigen_region_report(const PeriodicGrid& grid, const LameParameters& par,
                                const PotentialField* v, const ExponentPair& pq, double ell,
                                double t, double c_user, std::int64_t dense_cap) {
  const int d = grid.dim();
  RegionTag tag = classify(d, pq);
  if (tag != RegionTag::R1 && tag != RegionTag::R2Tilde && tag != RegionTag::R3Tilde &&
      tag != RegionTag::R3TildePrime)
    throw DomainError("eigen report needs (1/p,1/q) in one of the four resolvent regions");

  EigenReport rep;
  rep.d = d;
  rep.mu = par.mu;
  rep.lambda = par.lambda;
  rep.exponents = pq;
  rep.ell = ell;
  rep.t = t;
  rep.c_user = c_user;
  rep.note = "desk-scale demonstration: grid eigenvalues approximate the continuum "
             "L^2 spectrum; the report records, it does not certify";

  double p = pq.x == Rat(0) ? std::numeric_limits<double>::infinity() : 1.0 / to_double(pq.x);
  double q = pq.y == Rat(0) ? std::numeric_limits<double>::infinity() : 1.0 / to_double(pq.y);
  rep.threshold = smallness_threshold(d, p, q, ell, c_user, t);
  if (v != nullptr) {
    double pinv = to_double(pq.x), qinv = to_double(pq.y);
    double s = pinv - qinv > 1e-15 ? 1.0 / (pinv - qinv) : std::numeric_limits<double>::infinity();
    rep.potential_norm_s = potential_norm(*v, s);
  }
  rep.hypothesis_satisfied = rep.potential_norm_s <= rep.threshold;

  std::vector<Cplx> eigs =
      dense_spectrum(assemble_operator(grid, par, v, dense_cap));
  for (Cplx e : eigs) {
    EigenEntry entry;
    entry.value = e;
    double dist = e.real() >= 0.0 ? std::abs(e.imag()) : std::abs(e);
    if (dist <= rep.on_ray_tolerance) {
      entry.flag = "on_ray";
    } else {
      entry.kappa_value = kappa(d, pq, e);
      entry.flag = *entry.kappa_value <= ell ? "in_Z" : "outside_Z";
    }
    rep.entries.push_back(std::move(entry));
  }
  return rep;
}

}  // namespace lamelab
