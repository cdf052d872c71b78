#include "lamelab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "lamelab/bumps.hpp"
#include "lamelab/errors.hpp"
#include "lamelab/parallel.hpp"
#include "lamelab/quadrature.hpp"

namespace lamelab {

namespace {

const double kPi = std::acos(-1.0);

int next_pow2(double x) {
  int n = 2;
  while (n < x) n *= 2;
  return n;
}

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double h = nodes[i + 1] - nodes[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

// Space-side samples of the 1-D anisotropic-bump factors: 'b' the band
// profile, 'e' the even shelf profile.
const VectorField& carleman_profile_field(char which) {
  static std::map<char, VectorField> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(which);
  if (it != cache.end()) return it->second;
  PeriodicGrid g({1 << 15}, {256.0});
  VectorField hat(g, 1, FieldDomain::Frequency);
  auto& comp = hat.component(0);
  for (int i = 0; i < g.points(0); ++i) {
    double xi = g.frequency(0, i);
    comp[static_cast<std::size_t>(i)] =
        which == 'b' ? bumps::band(xi) : bumps::shelf(std::abs(xi));
  }
  auto [pos, ok] = cache.emplace(which, transform(hat, TransformDirection::Inverse));
  return pos->second;
}

double aniso_field_lp(int d, double delta, double p) {
  double nband = lp_norm(carleman_profile_field('b'), p);
  double nshelf = lp_norm(carleman_profile_field('e'), p);
  double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  double val = std::pow(delta, 1.0 - inv_p) * nband;   // xi_1 factor
  val *= std::pow(delta, 1.0 - inv_p) * nband;         // xi_2 factor
  for (int k = 0; k < d - 2; ++k)
    val *= std::pow(std::sqrt(delta), 1.0 - inv_p) * nshelf;
  return val;
}

Cplx carleman_scalar(const Eigen::VectorXd& xi) {
  Cplx w(xi.squaredNorm() - 1.0, 2.0 * xi[0]);
  return Cplx(xi[0], 1.0) * xi[1] / (w * w);
}

}  // namespace

CarlemanConfig::CarlemanConfig(int d_, LameParameters par, Eigen::VectorXd v_)
    : d(d_), params(par), v(std::move(v_)) {
  if (d < 2) throw DomainError("carleman config needs d >= 2");
  if (v.size() != d) throw DomainError("carleman config: |v| has wrong dimension");
  if (std::abs(v.norm() - 1.0) > 1e-12)
    throw DomainError("carleman config: v must be a unit vector");
  m1 = Eigen::MatrixXcd::Zero(d, d);
  m2 = Eigen::MatrixXcd::Zero(d, d);
}

double aniso_profile(int d, double delta, const Eigen::VectorXd& xi) {
  if (xi.size() != d) throw DomainError("aniso_profile: wrong dimension");
  double v = bumps::band(xi[0] / delta) * bumps::band((xi[1] - 1.0) / delta);
  if (d > 2 && v != 0.0) v *= bumps::shelf(xi.tail(d - 2).norm() / std::sqrt(delta));
  return v;
}

PeriodicGrid aniso_grid(int d, double delta) {
  if (d < 2) throw DomainError("aniso grid needs d >= 2");
  if (!(delta > 0.0) || delta > 0.25) throw DomainError("aniso grid needs 0 < delta <= 1/4");
  std::vector<int> n;
  std::vector<double> L;
  // xi_1 axis resolves delta around 0; xi_2 axis around 1; bar axes sqrt(delta).
  L.push_back(24.0 / delta);
  n.push_back(next_pow2(2.0 * L.back() * 3.0 * delta / kPi));
  L.push_back(24.0 / delta);
  n.push_back(next_pow2(2.0 * L.back() * 1.5 / kPi));
  for (int k = 0; k < d - 2; ++k) {
    L.push_back(24.0 / std::sqrt(delta));
    n.push_back(next_pow2(2.0 * L.back() * 3.0 * std::sqrt(delta) / kPi));
  }
  return PeriodicGrid(n, L, /*half_offset=*/true);
}

VectorField aniso_field(int d, double delta, const PeriodicGrid& grid) {
  if (grid.dim() != d) throw DomainError("aniso_field: grid dimension mismatch");
  for (int k = 0; k < d; ++k) {
    double resolve = k < 2 ? delta / 4.0 : std::sqrt(delta) / 4.0;
    double reach = k == 1 ? 1.0 + 2.0 * delta : (k == 0 ? 2.0 * delta : 2.0 * std::sqrt(delta));
    if (grid.freq_spacing(k) > resolve)
      throw UnresolvedScaleError("grid does not resolve the bump scale on axis " +
                                     std::to_string(k),
                                 static_cast<long>(std::ceil(2.0 * kPi / resolve)));
    double nyq = kPi * grid.points(k) / (2.0 * grid.half_length(k));
    if (nyq < reach)
      throw UnresolvedScaleError("grid Nyquist range misses the bump on axis " + std::to_string(k),
                                 static_cast<long>(std::ceil(2.0 * grid.half_length(k) * reach / kPi)));
  }
  VectorField hat(grid, 1, FieldDomain::Frequency);
  auto& comp = hat.component(0);
  std::vector<int> idx;
  Eigen::VectorXd xi(d);
  for (std::int64_t p = 0; p < grid.total_points(); ++p) {
    grid.unflatten(p, idx);
    for (int k = 0; k < d; ++k) xi[k] = grid.frequency(k, idx[static_cast<std::size_t>(k)]);
    comp[static_cast<std::size_t>(p)] = aniso_profile(d, delta, xi);
  }
  return transform(hat, TransformDirection::Inverse);
}

std::vector<double> aniso_box_half_widths(int d, double delta) {
  std::vector<double> hw = {1.0 / (100.0 * delta), 1.0 / (100.0 * delta)};
  for (int k = 0; k < d - 2; ++k) hw.push_back(1.0 / (100.0 * std::sqrt(delta)));
  return hw;
}

CarlemanSweep carleman_exponent(int d, double p, double q, const std::vector<double>& deltas,
                                int threads) {
  if (d != 2 && d != 3) throw DomainError("carleman exponent sweep supports d in {2,3}");
  if (deltas.size() < 3) throw DomainError("carleman sweep needs at least 3 deltas");
  CarlemanSweep out;
  double pinv = std::isinf(p) ? 0.0 : 1.0 / p;
  double qinv = std::isinf(q) ? 0.0 : 1.0 / q;
  out.sweep.target_slope = -2.0 + 0.5 * (d + 2) * (pinv - qinv);

  out.sweep.points.resize(deltas.size());
  parallel_for_index(static_cast<int>(deltas.size()), threads, [&](int di) {
    const double delta = deltas[static_cast<std::size_t>(di)];
    SweepPoint pt;
    pt.delta = delta;
    pt.norm_f = aniso_field_lp(d, delta, p);

    // Frequency nodes over supp hhat.
    std::vector<std::vector<double>> fnodes, fweights;
    fnodes.push_back(linspace(0.5 * delta, 2.0 * delta, 33));
    fnodes.push_back(linspace(1.0 + 0.5 * delta, 1.0 + 2.0 * delta, 33));
    for (int k = 0; k < d - 2; ++k)
      fnodes.push_back(linspace(-2.0 * std::sqrt(delta), 2.0 * std::sqrt(delta), 33));
    for (auto& nodes : fnodes) fweights.push_back(trapezoid_weights(nodes));

    std::vector<Eigen::VectorXd> xis;
    std::vector<Cplx> coefs;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    Eigen::VectorXd xi(d);
    for (;;) {
      double w = 1.0;
      for (int k = 0; k < d; ++k) {
        auto ku = static_cast<std::size_t>(k);
        xi[k] = fnodes[ku][idx[ku]];
        w *= fweights[ku][idx[ku]];
      }
      double h = aniso_profile(d, delta, xi);
      if (h != 0.0) {
        xis.push_back(xi);
        coefs.push_back(w * h * carleman_scalar(xi));
      }
      int k = d - 1;
      for (; k >= 0; --k) {
        auto ku = static_cast<std::size_t>(k);
        if (++idx[ku] < fnodes[ku].size()) break;
        idx[ku] = 0;
      }
      if (k < 0) break;
    }

    auto hw = aniso_box_half_widths(d, delta);
    std::vector<std::vector<double>> xnodes, xweights;
    for (int k = 0; k < d; ++k) {
      xnodes.push_back(linspace(-hw[static_cast<std::size_t>(k)], hw[static_cast<std::size_t>(k)], 9));
      xweights.push_back(trapezoid_weights(xnodes.back()));
    }
    double acc = 0.0, best = 0.0;
    std::fill(idx.begin(), idx.end(), 0);
    Eigen::VectorXd x(d);
    for (;;) {
      double wx = 1.0;
      for (int k = 0; k < d; ++k) {
        auto ku = static_cast<std::size_t>(k);
        x[k] = xnodes[ku][idx[ku]];
        wx *= xweights[ku][idx[ku]];
      }
      Cplx e{};
      for (std::size_t m = 0; m < xis.size(); ++m)
        e += coefs[m] * std::polar(1.0, x.dot(xis[m]));
      double mag = std::abs(e) / std::pow(2.0 * kPi, d);
      best = std::max(best, mag);
      if (!std::isinf(q)) acc += wx * std::pow(mag, q);
      int k = d - 1;
      for (; k >= 0; --k) {
        auto ku = static_cast<std::size_t>(k);
        if (++idx[ku] < xnodes[ku].size()) break;
        idx[ku] = 0;
      }
      if (k < 0) break;
    }
    pt.norm_tf = std::isinf(q) ? best : std::pow(acc, 1.0 / q);
    pt.ratio = pt.norm_tf / pt.norm_f;
    out.sweep.points[static_cast<std::size_t>(di)] = pt;
  });

  std::vector<double> xs, ys;
  for (const auto& pt : out.sweep.points) {
    xs.push_back(pt.delta);
    ys.push_back(pt.ratio);
  }
  out.sweep.fit = fit_loglog(xs, ys);
  out.estimate_impossible = out.sweep.fit.slope < 0.0;
  return out;
}

namespace {

double annulus_profile(double eps, double r) {
  return bumps::lowpass(eps * eps * r) - bumps::lowpass(eps * r);
}

// Polar quadrature over the annulus support with doubling refinement.
double annulus_integral(double eps, const std::function<double(double, double)>& f_polar) {
  double rlo = 0.9 / eps, rhi = 2.2 / (eps * eps);
  auto value_at = [&](int nr, int nth) {
    auto rs = geomspace(rlo, rhi, nr);
    auto wr = trapezoid_weights(rs);
    double acc = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      double r = rs[i];
      double h = annulus_profile(eps, r);
      if (h == 0.0) continue;
      double ang = 0.0;
      for (int t = 0; t < nth; ++t) ang += f_polar(r, 2.0 * kPi * t / nth);
      acc += wr[i] * r * h * ang * (2.0 * kPi / nth);
    }
    return acc;
  };
  int nr = 1001, nth = 32;
  double prev = value_at(nr, nth);
  for (int iter = 0; iter < 6; ++iter) {
    nr = 2 * (nr - 1) + 1;
    nth *= 2;
    double cur = value_at(nr, nth);
    if (std::abs(cur - prev) <= 1e-4 * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

DivergenceResult log_divergence(const LameParameters& params,
                                const std::vector<double>& eps_list) {
  if (params.rho() == 1.0)
    throw DomainError("log divergence requires lambda + 2 mu != mu (rho != 1)");
  if (eps_list.size() < 3) throw DomainError("divergence sweep needs at least 3 epsilons");
  for (double eps : eps_list)
    if (!(eps > 0.0) || eps > 0.125)
      throw ParameterRangeError("log divergence requires eps in (0, 1/8]");

  const double mu = params.mu;
  const double pm = params.pressure_modulus();
  DivergenceResult out;
  for (double eps : eps_list) {
    // S = (|xi|^2-1)^2, T = 4 xi_1^2, W = S + T.
    auto S_of = [](double r) { return (r * r - 1.0) * (r * r - 1.0); };
    double I1 = annulus_integral(eps, [&](double r, double th) {
      double x1 = r * std::cos(th);
      double S = S_of(r), T = 4.0 * x1 * x1, W = S + T;
      return x1 * x1 * (S - T) / (W * W);
    });
    double I2 = annulus_integral(eps, [&](double r, double th) {
      double x2 = r * std::sin(th);
      double x1 = r * std::cos(th);
      double S = S_of(r), T = 4.0 * x1 * x1, W = S + T;
      return x2 * x2 * (S - T) / (W * W);
    });
    double I3 = annulus_integral(eps, [&](double r, double th) {
      double x1 = r * std::cos(th);
      double S = S_of(r), T = 4.0 * x1 * x1, W = S + T;
      return (8.0 * x1 * x1 * (r * r - 1.0) - (S - T)) / (W * W);
    });
    // Direct route: (1/mu) Re(1/w) + (1/pm - 1/mu) xi_2^2 Re(1/w^2).
    double A = annulus_integral(eps, [&](double r, double th) {
      double x1 = r * std::cos(th);
      double W = S_of(r) + 4.0 * x1 * x1;
      return (r * r - 1.0) / W;
    });
    double Bv = annulus_integral(eps, [&](double r, double th) {
      double x1 = r * std::cos(th), x2 = r * std::sin(th);
      double S = S_of(r), T = 4.0 * x1 * x1, W = S + T;
      return x2 * x2 * (S - T) / (W * W);
    });
    DivergencePoint pt;
    pt.eps = eps;
    pt.ln_inv_eps = std::log(1.0 / eps);
    const double norm = 1.0 / (4.0 * kPi * kPi);
    pt.value = norm * ((I1 + I3) / mu + I2 / pm);
    pt.value_direct = norm * (A / mu + (1.0 / pm - 1.0 / mu) * Bv);
    out.points.push_back(pt);
  }
  std::vector<double> xs, ys;
  for (const auto& pt : out.points) {
    xs.push_back(pt.ln_inv_eps);
    ys.push_back(pt.value);
  }
  out.fit = fit_linear(xs, ys);
  out.monotone = true;
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i)
    out.monotone = out.monotone && out.points[i + 1].value > out.points[i].value;
  return out;
}

DivergenceResult admissibility_divergence(Cplx z, double rho,
                                          const std::vector<double>& eps_list) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw DomainError("admissibility divergence needs |z| = 1");
  if (std::abs(z - Cplx(1.0, 0.0)) <= 1e-12)
    throw DomainError("z = 1 is excluded (it lies in the spectrum direction)");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  if (eps_list.size() < 3) throw DomainError("divergence sweep needs at least 3 epsilons");
  double eps_cap = 0.5 * std::min(1.0, std::sqrt(rho));
  for (double eps : eps_list)
    if (!(eps > 0.0) || eps > eps_cap)
      throw ParameterRangeError("admissibility divergence requires eps <= min(1, sqrt(rho))/2");

  const double a = z.real(), b = z.imag();
  DivergenceResult out;
  for (double eps : eps_list) {
    double val = annulus_integral(eps, [&](double r, double th) {
      double x1 = r * std::cos(th), x2 = r * std::sin(th);
      double rsq = r * r;
      double t1 = (rsq - a) / ((rsq - a) * (rsq - a) + b * b) * (x2 * x2 / rsq);
      double t2 = (rho * rsq - a) / ((rho * rsq - a) * (rho * rsq - a) + b * b) * (x1 * x1 / rsq);
      return t1 + t2;
    });
    DivergencePoint pt;
    pt.eps = eps;
    pt.ln_inv_eps = std::log(1.0 / eps);
    pt.value = val / (4.0 * kPi * kPi);
    pt.value_direct = pt.value;
    out.points.push_back(pt);
  }
  std::vector<double> xs, ys;
  for (const auto& pt : out.points) {
    xs.push_back(pt.ln_inv_eps);
    ys.push_back(pt.value);
  }
  out.fit = fit_linear(xs, ys);
  out.monotone = true;
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i)
    out.monotone = out.monotone && out.points[i + 1].value > out.points[i].value;
  return out;
}

double annulus_field_l1(double eps) {
  if (!(eps > 0.0) || eps >= 0.5) throw DomainError("annulus field needs eps in (0, 1/2)");
  // Radial inverse transform of the lowpass profile, tabulated once:
  // Phi(u) = (2 pi)^{-1} int_0^2 lowpass(s) J_0(u s) s ds.
  static std::vector<double> us, phis;
  static std::mutex m;
  {
    std::lock_guard<std::mutex> lock(m);
    if (us.empty()) {
      us = linspace(0.0, 60.0, 3001);
      phis.resize(us.size());
      auto snodes = linspace(0.0, 2.0, 801);
      auto sw = trapezoid_weights(snodes);
      for (std::size_t i = 0; i < us.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < snodes.size(); ++k) {
          double s = snodes[k];
          acc += sw[k] * bumps::lowpass(s) * std::cyl_bessel_j(0.0, us[i] * s) * s;
        }
        phis[i] = acc / (2.0 * kPi);
      }
    }
  }
  auto phi_at = [&](double u) {
    if (u >= 60.0) return 0.0;
    double t = u / 60.0 * 3000.0;
    auto i = static_cast<std::size_t>(t);
    if (i + 1 >= us.size()) return phis.back();
    double frac = t - static_cast<double>(i);
    return phis[i] * (1.0 - frac) + phis[i + 1] * frac;
  };
  // ||h_eps||_1 = 2 pi [ int_0^60 |Phi(u) - eps^2 Phi(eps u)| u du
  //                      + int_{60 eps}^60 |Phi(u)| u du ].
  auto u1 = linspace(0.0, 60.0, 6001);
  std::vector<double> f1(u1.size()), f2(u1.size());
  for (std::size_t i = 0; i < u1.size(); ++i) {
    double u = u1[i];
    f1[i] = std::abs(phi_at(u) - eps * eps * phi_at(eps * u)) * u;
    f2[i] = u >= 60.0 * eps ? std::abs(phi_at(u)) * u : 0.0;
  }
  return 2.0 * kPi * (trapezoid(u1, f1) + trapezoid(u1, f2));
}

VectorField conjugated_solve(const CarlemanConfig& config, const VectorField& f) {
  if (f.grid().dim() != config.d || f.components() != config.d)
    throw DomainError("conjugated_solve: field shape does not match the config");
  const bool plain = config.m1.isZero(0.0) && config.m2.isZero(0.0);
  const LameParameters par = config.params;
  const Eigen::VectorXd v = config.v;
  if (plain) {
    return apply_multiplier(f, MatrixSymbol([par, v](const FrequencyPoint& xi) {
                              return conjugated_inverse(xi, v, par);
                            }));
  }
  const Eigen::MatrixXcd m1 = config.m1, m2 = config.m2;
  return apply_multiplier(f, MatrixSymbol([par, v, m1, m2](const FrequencyPoint& xi) {
    SymbolMatrix s = conjugated_matrix(xi, v, par) + m2;
    Eigen::VectorXcd eta = xi.xi.cast<Cplx>() + Cplx(0.0, 1.0) * v.cast<Cplx>();
    s += Cplx(0.0, 1.0) * (m1 * eta.asDiagonal().toDenseMatrix());
    Eigen::PartialPivLU<SymbolMatrix> lu(s);
    if (std::abs(lu.determinant()) <= kPoleThreshold)
      throw PoleError("conjugated system symbol is singular at a lattice point");
    return SymbolMatrix(lu.inverse());
  }));
}

ScalingCheck scaling_necessity_check(int d, double p, double q,
                                     const std::vector<double>& scales,
                                     const LameParameters& params) {
  if (d != 2 && d != 3) throw DomainError("scaling check supports d in {2,3}");
  if (scales.size() < 3) throw DomainError("scaling check needs at least 3 scales");
  const int n = d == 2 ? 64 : 32;
  const double L = d == 2 ? 16.0 : 12.0;
  PeriodicGrid grid = PeriodicGrid::isotropic(d, n, L, /*half_offset=*/true);

  ScalingCheck out;
  out.scales = scales;
  double pinv = std::isinf(p) ? 0.0 : 1.0 / p;
  double qinv = std::isinf(q) ? 0.0 : 1.0 / q;
  out.target_exponent = d * (pinv - qinv) - 2.0;

  const double mu = params.mu, lam = params.lambda;
  for (double s : scales) {
    if (!(s > 0.0)) throw DomainError("scales must be positive");
    VectorField u(grid, d);
    for (int j = 0; j < d; ++j) {
      double amp = 1.0 + 0.25 * j;
      u.fill(j, [s, amp](const Eigen::VectorXd& x) {
        return Cplx(amp * std::exp(-0.5 * s * s * x.squaredNorm()), 0.0);
      });
    }
    // Weight direction rescales with the dilation: eta = xi + i v / s.
    Eigen::VectorXd vs = Eigen::VectorXd::Zero(d);
    vs[0] = 1.0 / s;
    VectorField lu = apply_multiplier(u, MatrixSymbol([=](const FrequencyPoint& xi) {
                                        Eigen::VectorXcd eta =
                                            xi.xi.cast<Cplx>() + Cplx(0.0, 1.0) * vs.cast<Cplx>();
                                        Cplx w = eta.transpose() * eta;
                                        SymbolMatrix m =
                                            mu * w * SymbolMatrix::Identity(d, d);
                                        m += (lam + mu) * (eta * eta.transpose());
                                        return m;
                                      }));
    out.ratios.push_back(lp_norm(u, q) / lp_norm(lu, p));
  }
  std::vector<double> xs = scales;
  out.fit = fit_loglog(xs, out.ratios);
  out.bounded = std::abs(out.fit.slope) <= 0.05;
  return out;
}

}  // namespace lamelab
