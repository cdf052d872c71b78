#include "lamelab/sharpness.hpp"

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

double psi_radial(double r) { return 1.0 - std::sqrt(1.0 - r * r); }

double a_reduced(double tau, double r, double delta) {
  double q = tau * (tau + 2.0 * psi_radial(r) - 2.0);
  return delta / (q * q + delta * delta);
}

double b_reduced(double tau, double r, double delta, double rho) {
  double psi = psi_radial(r);
  double q = tau * (tau + 2.0 * psi - 2.0) + 1.0 - rho;
  double lin = tau + psi - 1.0;
  return rho * rho * delta / (q * q + rho * rho * delta * delta) * (r * r) / (lin * lin);
}

// Raw imaginary-part symbol, scalar form: first coordinate c = xi_1 / |xi|.
double imag_raw(double rsq, double csq, double delta, double rho) {
  double m_sphere = delta / ((rsq - 1.0) * (rsq - 1.0) + delta * delta) * (1.0 - csq);
  double m_shift = delta / ((rho * rsq - 1.0) * (rho * rsq - 1.0) + delta * delta) * csq;
  return m_sphere + m_shift;
}

// Cached space-side samples of the 1-D slab factors. ||h_delta||_p
// factorizes into these profile norms and explicit delta powers.
const VectorField& profile_field(char which) {
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
    comp[static_cast<std::size_t>(i)] = which == 'p' ? bumps::phi(xi) : bumps::psi(xi);
  }
  auto [pos, ok] = cache.emplace(which, transform(hat, TransformDirection::Inverse));
  return pos->second;
}

struct FreqNodes {
  // Tensor nodes over supp hhat: slab axis last.
  std::vector<std::vector<double>> axis_nodes;
  std::vector<std::vector<double>> axis_weights;
};

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double h = nodes[i + 1] - nodes[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

FreqNodes knapp_nodes(int d, double delta) {
  FreqNodes fn;
  double s = std::sqrt(delta);
  for (int k = 0; k < d - 1; ++k) {
    fn.axis_nodes.push_back(linspace(-s, s, 49));
    fn.axis_weights.push_back(trapezoid_weights(fn.axis_nodes.back()));
  }
  fn.axis_nodes.push_back(linspace(1.0 + 0.25 * delta, 1.0 + delta, 65));
  fn.axis_weights.push_back(trapezoid_weights(fn.axis_nodes.back()));
  return fn;
}

template <typename F>
void for_each_node(const FreqNodes& fn, F&& body) {
  const int d = static_cast<int>(fn.axis_nodes.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  Eigen::VectorXd xi(d);
  for (;;) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      auto ku = static_cast<std::size_t>(k);
      xi[k] = fn.axis_nodes[ku][idx[ku]];
      w *= fn.axis_weights[ku][idx[ku]];
    }
    body(xi, w);
    int k = d - 1;
    for (; k >= 0; --k) {
      auto ku = static_cast<std::size_t>(k);
      if (++idx[ku] < fn.axis_nodes[ku].size()) break;
      idx[ku] = 0;
    }
    if (k < 0) break;
  }
}

}  // namespace

double knapp_profile(int d, double delta, const Eigen::VectorXd& xi) {
  if (xi.size() != d) throw DomainError("knapp_profile: wrong frequency dimension");
  double s = std::sqrt(delta);
  double v = bumps::psi((xi[d - 1] - 1.0) / delta);
  for (int j = 0; j < d - 1 && v != 0.0; ++j) v *= bumps::phi(xi[j] / s);
  return v;
}

PeriodicGrid knapp_grid(int d, double delta) {
  if (d < 2) throw DomainError("knapp experiment needs d >= 2");
  if (!(delta > 0.0) || delta > 0.25) throw DomainError("knapp experiment needs 0 < delta <= 1/4");
  std::vector<int> n;
  std::vector<double> L;
  double s = std::sqrt(delta);
  for (int k = 0; k < d - 1; ++k) {
    L.push_back(24.0 / s);
    n.push_back(next_pow2(2.0 * L.back() * 3.0 * s / kPi));
  }
  L.push_back(24.0 / delta);
  n.push_back(next_pow2(2.0 * L.back() * 1.5 / kPi));
  return PeriodicGrid(n, L, /*half_offset=*/true);
}

VectorField knapp_field(int d, double delta, const PeriodicGrid& grid) {
  if (grid.dim() != d) throw DomainError("knapp_field: grid dimension mismatch");
  double s = std::sqrt(delta);
  for (int k = 0; k < d; ++k) {
    const bool slab = k == d - 1;
    const double resolve = slab ? delta / 4.0 : s / 4.0;
    const double reach = slab ? 1.0 + 2.0 * delta : 2.0 * s;
    if (grid.freq_spacing(k) > resolve) {
      long need = static_cast<long>(std::ceil(kPi / resolve * 2.0));
      throw UnresolvedScaleError("grid does not resolve the slab scale on axis " +
                                     std::to_string(k) + "; box must satisfy pi/L <= " +
                                     std::to_string(resolve),
                                 need);
    }
    double nyquist = kPi * grid.points(k) / (2.0 * grid.half_length(k));
    if (nyquist < reach) {
      long need = static_cast<long>(
          std::ceil(2.0 * grid.half_length(k) * reach / kPi));
      throw UnresolvedScaleError(
          "grid Nyquist range misses the slab support on axis " + std::to_string(k), need);
    }
  }
  VectorField hat(grid, 1, FieldDomain::Frequency);
  auto& comp = hat.component(0);
  std::vector<int> idx;
  Eigen::VectorXd xi(d);
  for (std::int64_t p = 0; p < grid.total_points(); ++p) {
    grid.unflatten(p, idx);
    for (int k = 0; k < d; ++k) xi[k] = grid.frequency(k, idx[static_cast<std::size_t>(k)]);
    comp[static_cast<std::size_t>(p)] = knapp_profile(d, delta, xi);
  }
  return transform(hat, TransformDirection::Inverse);
}

std::vector<double> knapp_box_half_widths(int d, double delta) {
  std::vector<double> hw;
  double s = std::sqrt(delta);
  for (int k = 0; k < d - 1; ++k) hw.push_back(1.0 / (100.0 * d * s));
  hw.push_back(1.0 / (100.0 * delta));
  return hw;
}

double imag_symbol_sup(int d, double delta, double rho) {
  (void)d;  // the scalar reduction (r, c) covers every dimension
  if (rho == 1.0) throw DomainError("imag symbol sup requires rho != 1");
  std::vector<double> radii = linspace(0.05, 3.0, 601);
  for (double u : linspace(-8.0, 8.0, 321)) {
    radii.push_back(1.0 + delta * u);
    radii.push_back((1.0 + delta * u) / std::sqrt(rho));
  }
  double best = 0.0;
  for (double r : radii) {
    if (r <= 0.0) continue;
    double rsq = r * r;
    for (double c : linspace(0.0, 1.0, 101)) {
      best = std::max(best, imag_raw(rsq, c * c, delta, rho));
    }
  }
  return best;
}

double knapp_field_lp(int d, double delta, double p) {
  const auto& psi_f = profile_field('s');
  const auto& phi_f = profile_field('p');
  double npsi = lp_norm(psi_f, p);
  double nphi = lp_norm(phi_f, p);
  double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return std::pow(delta, 1.0 - inv_p) * npsi *
         std::pow(std::pow(delta, 0.5 * (1.0 - inv_p)) * nphi, d - 1);
}

double knapp_phase_coherence(int d, double delta) {
  auto hw = knapp_box_half_widths(d, delta);
  double s = std::sqrt(delta);
  double total = 0.0;
  for (int k = 0; k < d - 1; ++k) total += hw[static_cast<std::size_t>(k)] * s;
  total += hw[static_cast<std::size_t>(d - 1)] * delta;
  return total;
}

namespace {

SweepPoint knapp_point_quadrature(int d, double p, double q, double delta, double rho) {
  if (d != 2 && d != 3)
    throw DomainError("spectral-quadrature knapp path supports d in {2,3}");
  SweepPoint pt;
  pt.delta = delta;
  pt.norm_f = knapp_field_lp(d, delta, p);

  FreqNodes fn = knapp_nodes(d, delta);
  const bool plancherel = p == 2.0 && q == 2.0;
  if (plancherel) {
    double num = 0.0, den = 0.0;
    for_each_node(fn, [&](const Eigen::VectorXd& xi, double w) {
      double h = knapp_profile(d, delta, xi);
      if (h == 0.0) return;
      double rsq = xi.squaredNorm();
      double csq = xi[0] * xi[0] / rsq;
      double I = imag_raw(rsq, csq, delta, rho);
      num += w * I * I * h * h;
      den += w * h * h;
    });
    pt.ratio = std::sqrt(num / den);
    pt.norm_tf = pt.ratio * pt.norm_f;
    pt.oracle = imag_symbol_sup(d, delta, rho);
    return pt;
  }

  // Observation nodes over the box A_delta.
  auto hw = knapp_box_half_widths(d, delta);
  std::vector<std::vector<double>> xnodes, xweights;
  for (int k = 0; k < d; ++k) {
    xnodes.push_back(linspace(-hw[static_cast<std::size_t>(k)], hw[static_cast<std::size_t>(k)], 9));
    xweights.push_back(trapezoid_weights(xnodes.back()));
  }
  // Collect frequency nodes once.
  std::vector<Eigen::VectorXd> xis;
  std::vector<double> ws;
  for_each_node(fn, [&](const Eigen::VectorXd& xi, double w) {
    double h = knapp_profile(d, delta, xi);
    if (h == 0.0) return;
    double rsq = xi.squaredNorm();
    double I = imag_raw(rsq, xi[0] * xi[0] / rsq, delta, rho);
    xis.push_back(xi);
    ws.push_back(w * h * I);
  });

  double acc = 0.0;
  double best = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
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
      e += ws[m] * std::polar(1.0, x.dot(xis[m]));
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
  return pt;
}

SweepPoint knapp_point_grid(int d, double p, double q, double delta, double rho) {
  PeriodicGrid grid = knapp_grid(d, delta);
  VectorField h = knapp_field(d, delta, grid);
  const bool plancherel = p == 2.0 && q == 2.0;
  GridMask mask = plancherel ? full_mask(grid) : box_mask(grid, knapp_box_half_widths(d, delta));
  ScalarSymbol sym = [delta, rho](const FrequencyPoint& xi) {
    return Cplx(imag_symbol(xi, delta, rho, ImagVariant::Raw).total, 0.0);
  };
  SweepPoint pt;
  pt.delta = delta;
  pt.norm_f = lp_norm(h, p);
  pt.ratio = restricted_ratio(sym, h, p, q, mask);
  pt.norm_tf = pt.ratio * pt.norm_f;
  if (plancherel) pt.oracle = imag_symbol_sup(d, delta, rho);
  return pt;
}

}  // namespace

SweepResult knapp_exponent(int d, double p, double q, const std::vector<double>& deltas,
                           double rho, KnappMethod method, int threads) {
  if (deltas.size() < 5) throw DomainError("knapp sweep needs at least 5 dyadic deltas");
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("knapp exponents need p, q >= 1");
  SweepResult res;
  double qinv = std::isinf(q) ? 0.0 : 1.0 / q;
  double pinv = std::isinf(p) ? 0.0 : 1.0 / p;
  res.target_slope = -1.0 + 0.5 * (d + 1) * (pinv - qinv);
  res.points.resize(deltas.size());
  parallel_for_index(static_cast<int>(deltas.size()), threads, [&](int i) {
    auto iu = static_cast<std::size_t>(i);
    res.points[iu] = method == KnappMethod::SpectralQuadrature
                         ? knapp_point_quadrature(d, p, q, deltas[iu], rho)
                         : knapp_point_grid(d, p, q, deltas[iu], rho);
  });
  std::vector<double> xs, ys;
  for (const auto& pt : res.points) {
    xs.push_back(pt.delta);
    ys.push_back(pt.ratio);
  }
  res.fit = fit_loglog(xs, ys);
  return res;
}

double focusing_profile(int d, double rho, double eps_circ, const Eigen::VectorXd& xi) {
  if (xi.size() != d) throw DomainError("focusing_profile: wrong dimension");
  if (rho == 1.0) throw DomainError("focusing profile requires rho != 1");
  double r = xi.tail(d - 1).norm();
  if (r >= 0.1) return 0.0;
  double psi = psi_radial(r);
  double tau = xi[0] + 1.0 - psi;  // slab variable around the lower cap
  double cut = bumps::chi(r) * bumps::phi_plateau(tau, eps_circ);
  if (cut == 0.0) return 0.0;
  double s = xi[0];
  return cut * (s * s + r * r) / (s * s);
}

VectorField focusing_field(int d, double rho, double eps_circ, const PeriodicGrid& grid) {
  if (grid.dim() != d) throw DomainError("focusing_field: grid dimension mismatch");
  if (grid.freq_spacing(0) > eps_circ / 4.0)
    throw UnresolvedScaleError("grid does not resolve the eps_circ slab",
                               static_cast<long>(std::ceil(4.0 * kPi / eps_circ)));
  double nyq = kPi * grid.points(0) / (2.0 * grid.half_length(0));
  if (nyq < 1.3)
    throw UnresolvedScaleError("grid Nyquist range misses the focusing support",
                               static_cast<long>(std::ceil(2.6 * grid.half_length(0) / kPi)));
  VectorField hat(grid, 1, FieldDomain::Frequency);
  auto& comp = hat.component(0);
  std::vector<int> idx;
  Eigen::VectorXd xi(d);
  for (std::int64_t p = 0; p < grid.total_points(); ++p) {
    grid.unflatten(p, idx);
    for (int k = 0; k < d; ++k) xi[k] = grid.frequency(k, idx[static_cast<std::size_t>(k)]);
    comp[static_cast<std::size_t>(p)] = focusing_profile(d, rho, eps_circ, xi);
  }
  return transform(hat, TransformDirection::Inverse);
}

namespace {

Cplx osc_quadrature(int d, double x1, double xp, double tau, double delta) {
  auto value_at = [&](int n) {
    auto nodes = linspace(0.0, 0.1, n);
    std::vector<Cplx> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double r = nodes[i];
      double amp = a_reduced(tau, r, delta) * bumps::chi(r);
      Cplx osc = std::polar(1.0, x1 * psi_radial(r));
      if (d == 2) {
        vals[i] = 2.0 * std::cos(xp * r) * amp * osc;
      } else {
        vals[i] = 2.0 * kPi * r * std::cyl_bessel_j(0.0, std::abs(xp) * r) * amp * osc;
      }
    }
    return trapezoid(nodes, vals);
  };
  int n = 513;
  Cplx prev = value_at(n);
  for (int iter = 0; iter < 9; ++iter) {
    n = 2 * (n - 1) + 1;
    Cplx cur = value_at(n);
    if (std::abs(cur - prev) <= 1e-8 * std::max(1e-30, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

Cplx calibrated_leading_constant(int d) {
  static std::map<int, Cplx> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  const double x1 = 1024.0, delta = 0.25;
  Cplx quad = osc_quadrature(d, x1, 0.0, 0.0, delta);
  // leading form: c_d e^{i(x1-|x|)} a(0,0) x1^{-(d-1)/2}; at x'=0 the phase
  // factor is 1 and a(0,0) = 1/delta.
  Cplx cd = quad * std::pow(x1, 0.5 * (d - 1)) * delta;
  cache[d] = cd;
  return cd;
}

Cplx oscillatory_integral(int d, const Eigen::VectorXd& x, double tau, double delta,
                          OscMethod method) {
  if (d != 2 && d != 3) throw DomainError("oscillatory_integral supports d in {2,3}");
  if (x.size() != d) throw DomainError("oscillatory_integral: wrong point dimension");
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("oscillatory_integral needs 0 < delta <= 1");
  double x1 = x[0];
  double xp = x.tail(d - 1).norm();
  if (method == OscMethod::Quadrature) return osc_quadrature(d, x1, xp, tau, delta);

  if (std::abs(x1) < 0.5 || 32.0 * xp > std::abs(x1))
    throw DomainError("leading asymptotic requires |x_1| >= 1/2 and 2^5 |x'| <= |x_1|");
  double xnorm = std::sqrt(x1 * x1 + xp * xp);
  double rstar = xp / xnorm;  // |g(x'/x_1)|
  Cplx phase = std::polar(1.0, x1 - (x1 >= 0 ? xnorm : -xnorm));
  return calibrated_leading_constant(d) * phase * a_reduced(tau, rstar, delta) *
         std::pow(std::abs(x1), -0.5 * (d - 1));
}

namespace {

// tau panels in three zones per sign: a linear core resolving the width-delta
// Lorentzian peak, a log zone out to the nu delta cutoff, and a log tail to
// the slab edge 2 eps_circ. Filon panels keep the tail honest where
// x_1 * dtau is large.
std::vector<double> focusing_tau_edges(double nu, double delta, double eps_circ) {
  double inner = std::min(8.0 * delta, 0.25 * eps_circ);
  double mid = std::min(std::max(8.0 * nu * delta, 2.0 * inner), 0.5 * eps_circ);
  std::vector<double> pos;
  auto seg1 = geomspace(inner, mid, 121);
  auto seg2 = geomspace(mid, 2.0 * eps_circ, 121);
  pos.insert(pos.end(), seg1.begin(), seg1.end());
  pos.insert(pos.end(), seg2.begin() + 1, seg2.end());
  std::vector<double> edges;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) edges.push_back(-*it);
  auto core = linspace(-inner, inner, 161);
  edges.insert(edges.end(), core.begin() + 1, core.end() - 1);
  edges.insert(edges.end(), pos.begin(), pos.end());
  return edges;
}

}  // namespace

FocusingResult focusing_exponent(int d, double q, double rho, const std::vector<double>& deltas,
                                 double nu, int threads) {
  if (d != 2 && d != 3) throw DomainError("focusing experiment supports d in {2,3}");
  if (rho == 1.0) throw DomainError("focusing experiment requires rho != 1");
  if (!(q >= 1.0) || std::isinf(q)) throw DomainError("focusing experiment needs 1 <= q < inf");
  if (deltas.size() < 5) throw DomainError("focusing sweep needs at least 5 deltas");
  const double eps_circ = default_eps_circ(rho);
  for (double delta : deltas)
    if (nu * delta > eps_circ)
      throw ParameterRangeError("nu * delta exceeds eps_circ; shrink delta or nu");

  FocusingResult res;
  res.target_slope = 0.5 * (d - 1) - d / q;
  const int n_x1 = 9, n_xp = 6, n_r = 1201;
  auto rnodes = linspace(0.0, 0.1, n_r);
  auto rweights = trapezoid_weights(rnodes);
  const double twopi_d = std::pow(2.0 * kPi, d);

  res.points.resize(deltas.size());
  parallel_for_index(static_cast<int>(deltas.size()), threads, [&](int di) {
    const double delta = deltas[static_cast<std::size_t>(di)];
    FocusingPoint fp;
    fp.delta = delta;
    fp.x1_low = 1.0 / (20.0 * nu * delta);
    fp.x1_high = 1.0 / (10.0 * nu * delta);
    auto x1s = linspace(fp.x1_low, fp.x1_high, n_x1);
    auto wx1 = trapezoid_weights(x1s);
    auto tau_edges = focusing_tau_edges(nu, delta, eps_circ);
    auto tau_env = linspace(-2.0 * eps_circ, 2.0 * eps_circ, 321);

    double acc_main = 0.0, acc_bg = 0.0;
    for (int i = 0; i < n_x1; ++i) {
      double x1 = x1s[static_cast<std::size_t>(i)];
      // tau-transform of a(tau, r) against e^{i x1 tau} per radius.
      std::vector<Cplx> Ta(static_cast<std::size_t>(n_r));
      for (int ri = 0; ri < n_r; ++ri) {
        double r = rnodes[static_cast<std::size_t>(ri)];
        Ta[static_cast<std::size_t>(ri)] = integrate_oscillatory(
            [&](double t) {
              return Cplx(a_reduced(t, r, delta) * bumps::phi_plateau(t, eps_circ), 0.0);
            },
            tau_edges, x1);
      }
      auto xps = linspace(0.0, x1 / 32.0, n_xp);
      auto wxp = trapezoid_weights(xps);
      for (int j = 0; j < n_xp; ++j) {
        double xp = xps[static_cast<std::size_t>(j)];
        Cplx main{};
        for (int ri = 0; ri < n_r; ++ri) {
          auto riu = static_cast<std::size_t>(ri);
          double r = rnodes[riu];
          double amp = bumps::chi(r);
          if (amp == 0.0) continue;
          Cplx w = std::polar(1.0, x1 * psi_radial(r)) * amp;
          if (d == 2)
            w *= 2.0 * std::cos(xp * r);
          else
            w *= 2.0 * kPi * r * std::cyl_bessel_j(0.0, xp * r);
          main += rweights[riu] * w * Ta[riu];
        }
        double mval = std::abs(main) / twopi_d;

        // Envelope of the background channel: int |J(x;tau)| phi dtau.
        double env = 0.0;
        {
          std::vector<double> absj(tau_env.size());
          for (std::size_t ti = 0; ti < tau_env.size(); ++ti) {
            double t = tau_env[ti];
            double cut = bumps::phi_plateau(t, eps_circ);
            if (cut == 0.0) {
              absj[ti] = 0.0;
              continue;
            }
            Cplx j{};
            for (int ri = 0; ri < n_r; ++ri) {
              auto riu = static_cast<std::size_t>(ri);
              double r = rnodes[riu];
              double amp = bumps::chi(r) * b_reduced(t, r, delta, rho);
              if (amp == 0.0) continue;
              Cplx w = std::polar(1.0, x1 * psi_radial(r)) * amp;
              if (d == 2)
                w *= 2.0 * std::cos(xp * r);
              else
                w *= 2.0 * kPi * r * std::cyl_bessel_j(0.0, xp * r);
              j += rweights[riu] * w;
            }
            absj[ti] = std::abs(j) * cut;
          }
          env = trapezoid(tau_env, absj) / twopi_d;
        }

        double wgt = wx1[static_cast<std::size_t>(i)] * wxp[static_cast<std::size_t>(j)];
        if (d == 2) wgt *= 2.0;                 // even reflection in x'
        else wgt *= 2.0 * kPi * xp;             // polar measure in the x' plane
        acc_main += wgt * std::pow(mval, q);
        acc_bg += wgt * std::pow(env, q);
      }
      if (i == n_x1 / 2) {
        fp.q0_leading = std::abs(calibrated_leading_constant(d)) *
                        std::abs(Ta[0]) * std::pow(x1, -0.5 * (d - 1)) / twopi_d;
        // first corrector scale: x1^{-1} * sup of the order-2 tau-profile
        double h = delta / 8.0;
        std::vector<double> sup2(tau_env.size(), 0.0);
        for (std::size_t ti = 0; ti < tau_env.size(); ++ti) {
          double t = tau_env[ti];
          double cut = bumps::phi_plateau(t, eps_circ);
          if (cut == 0.0) continue;
          double best = 0.0;
          for (double r : linspace(0.0, 0.095, 20)) {
            double d2 = (a_reduced(t, r + h, delta) - 2.0 * a_reduced(t, r, delta) +
                         a_reduced(t, std::abs(r - h), delta)) /
                        (h * h);
            best = std::max(best, std::abs(d2));
          }
          sup2[ti] = best * cut;
        }
        fp.q1_diag = trapezoid(tau_env, sup2) * std::pow(x1, -0.5 * (d - 1) - 1.0) / twopi_d;
      }
    }
    fp.main_norm = std::pow(acc_main, 1.0 / q);
    fp.background_norm = std::pow(acc_bg, 1.0 / q);
    res.points[static_cast<std::size_t>(di)] = fp;
  });

  std::vector<double> xs, ym, yb;
  for (const auto& p : res.points) {
    xs.push_back(p.delta);
    ym.push_back(p.main_norm);
    yb.push_back(p.background_norm);
  }
  res.main_fit = fit_loglog(xs, ym);
  res.background_fit = fit_loglog(xs, yb);
  return res;
}

DerivativeBoundTable derivative_bound_check(int d, const std::vector<double>& deltas, double rho) {
  if (d != 2 && d != 3) throw DomainError("derivative bound check supports d in {2,3}");
  if (rho == 1.0) throw DomainError("derivative bound check requires rho != 1");
  const double eps_circ = default_eps_circ(rho);

  DerivativeBoundTable table;
  table.d = d;
  table.alpha_names = d == 2 ? std::vector<std::string>{"1", "d1", "d1^2"}
                             : std::vector<std::string>{"1", "d1", "d2", "d1^2", "d1 d2", "d2^2"};

  // Sample points of the xi' disc |xi'| <= 1/10 as cartesian coordinates.
  std::vector<Eigen::VectorXd> pts;
  if (d == 2) {
    for (double s : linspace(-0.095, 0.095, 39)) {
      Eigen::VectorXd v(1);
      v << s;
      pts.push_back(v);
    }
  } else {
    Eigen::VectorXd origin(2);
    origin << 0.0, 0.0;
    pts.push_back(origin);
    for (double r : linspace(0.01, 0.095, 9))
      for (int t = 0; t < 12; ++t) {
        Eigen::VectorXd v(2);
        double th = 2.0 * kPi * t / 12.0;
        v << r * std::cos(th), r * std::sin(th);
        pts.push_back(v);
      }
  }

  for (double delta : deltas) {
    DerivativeBoundRow row;
    row.delta = delta;
    row.ratio_sup.assign(table.alpha_names.size(), 0.0);
    const double h = delta / 8.0;

    std::vector<double> taus = {0.0};
    for (double t : geomspace(delta / 16.0, 2.0 * eps_circ, 36)) {
      taus.push_back(t);
      taus.push_back(-t);
    }

    auto aval = [&](double tau, const Eigen::VectorXd& xp) {
      return a_reduced(tau, xp.norm(), delta);
    };

    for (double tau : taus) {
      for (const auto& xp : pts) {
        double bound = aval(tau, xp);
        double a0 = bound;
        std::size_t col = 0;
        row.ratio_sup[col] = std::max(row.ratio_sup[col], a0 / bound);
        ++col;
        const int nprime = d - 1;
        std::vector<double> plus(static_cast<std::size_t>(nprime)),
            minus(static_cast<std::size_t>(nprime));
        for (int jx = 0; jx < nprime; ++jx) {
          Eigen::VectorXd e = Eigen::VectorXd::Zero(nprime);
          e[jx] = h;
          plus[static_cast<std::size_t>(jx)] = aval(tau, xp + e);
          minus[static_cast<std::size_t>(jx)] = aval(tau, xp - e);
          double d1 = (plus[static_cast<std::size_t>(jx)] - minus[static_cast<std::size_t>(jx)]) /
                      (2.0 * h);
          row.ratio_sup[col] = std::max(row.ratio_sup[col], std::abs(d1) / bound);
          ++col;
        }
        for (int jx = 0; jx < nprime; ++jx)
          for (int kx = jx; kx < nprime; ++kx) {
            double d2;
            if (jx == kx) {
              d2 = (plus[static_cast<std::size_t>(jx)] - 2.0 * a0 +
                    minus[static_cast<std::size_t>(jx)]) /
                   (h * h);
            } else {
              Eigen::VectorXd ej = Eigen::VectorXd::Zero(nprime), ek = Eigen::VectorXd::Zero(nprime);
              ej[jx] = h;
              ek[kx] = h;
              d2 = (aval(tau, xp + ej + ek) - aval(tau, xp + ej - ek) -
                    aval(tau, xp - ej + ek) + aval(tau, xp - ej - ek)) /
                   (4.0 * h * h);
            }
            row.ratio_sup[col] = std::max(row.ratio_sup[col], std::abs(d2) / bound);
            ++col;
          }
        row.b_sup_over_delta =
            std::max(row.b_sup_over_delta, b_reduced(tau, xp.norm(), delta, rho) / delta);
      }
    }
    table.rows.push_back(row);
  }

  table.ratio_spread.assign(table.alpha_names.size(), 0.0);
  for (std::size_t c = 0; c < table.alpha_names.size(); ++c) {
    double lo = 1e300, hi = 0.0;
    for (const auto& row : table.rows) {
      lo = std::min(lo, row.ratio_sup[c]);
      hi = std::max(hi, row.ratio_sup[c]);
    }
    table.ratio_spread[c] = lo > 0.0 ? hi / lo : 1e300;
  }
  double blo = 1e300, bhi = 0.0;
  for (const auto& row : table.rows) {
    blo = std::min(blo, row.b_sup_over_delta);
    bhi = std::max(bhi, row.b_sup_over_delta);
  }
  table.b_spread = blo > 0.0 ? bhi / blo : 1e300;
  return table;
}

}  // namespace lamelab
