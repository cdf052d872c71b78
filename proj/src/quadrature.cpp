#include "lamelab/quadrature.hpp"

#include <cmath>

#include "lamelab/errors.hpp"

namespace lamelab {

namespace {

template <typename T>
T simpson(double h, T fa, T fm, T fb) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

template <typename T>
T simpson_rec(const std::function<T(double)>& f, double a, double m, double b, T fa, T fm, T fb,
              T whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  T flm = f(lm), frm = f(rm);
  T left = simpson(m - a, fa, flm, fm);
  T right = simpson(b - m, fm, frm, fb);
  T delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <typename T>
T adaptive(const std::function<T(double)>& f, double a, double b, double tol, int max_depth) {
  if (!(b > a)) {
    if (b == a) return T{};
    throw DomainError("integrate_adaptive: reversed interval");
  }
  double m = 0.5 * (a + b);
  T fa = f(a), fm = f(m), fb = f(b);
  T whole = simpson(b - a, fa, fm, fb);
  double scale = std::max(std::abs(whole), 1e-300);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol * std::max(scale, 1.0), max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  return adaptive<double>(f, a, b, tol, max_depth);
}

Cplx integrate_adaptive_complex(const std::function<Cplx(double)>& f, double a, double b,
                                double tol, int max_depth) {
  return adaptive<Cplx>(f, a, b, tol, max_depth);
}

Cplx filon_panel(double omega, double a, double b, Cplx ga, Cplx gm, Cplx gb) {
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (a + b);
  const double x = omega * h;
  // Moments of 1, u, u^2 against e^{i omega u} on [-h, h].
  double m0, m2;
  double m1_im;
  if (std::abs(x) < 1e-3) {
    double x2 = x * x;
    m0 = 2.0 * h * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    m1_im = 2.0 * h * h * x * (1.0 / 3.0 - x2 / 30.0);
    m2 = 2.0 * h * h * h * (1.0 / 3.0 - x2 / 10.0);
  } else {
    double s = std::sin(x), c = std::cos(x);
    m0 = 2.0 * s / omega;
    m1_im = 2.0 * (s / (omega * omega) - h * c / omega);
    m2 = 2.0 * (h * h * s / omega + 2.0 * h * c / (omega * omega) - 2.0 * s / (omega * omega * omega));
  }
  Cplx c0 = gm;
  Cplx c1 = (gb - ga) / (2.0 * h);
  Cplx c2 = (ga - 2.0 * gm + gb) / (2.0 * h * h);
  Cplx val = c0 * m0 + c1 * Cplx(0.0, m1_im) + c2 * m2;
  return std::exp(Cplx(0.0, omega * m)) * val;
}

Cplx integrate_oscillatory(const std::function<Cplx(double)>& g, const std::vector<double>& edges,
                           double omega) {
  if (edges.size() < 2) throw DomainError("integrate_oscillatory: need at least one panel");
  Cplx total{};
  Cplx ga = g(edges[0]);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    double a = edges[k], b = edges[k + 1];
    if (!(b > a)) throw DomainError("integrate_oscillatory: edges must increase");
    Cplx gb = g(b);
    Cplx gm = g(0.5 * (a + b));
    total += filon_panel(omega, a, b, ga, gm, gb);
    ga = gb;
  }
  return total;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

Cplx trapezoid(const std::vector<double>& x, const std::vector<Cplx>& y) {
  Cplx s{};
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw DomainError("linspace needs n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return out;
}

std::vector<double> geomspace(double a, double b, int n) {
  if (n < 2) throw DomainError("geomspace needs n >= 2");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("geomspace needs positive endpoints");
  std::vector<double> out(static_cast<std::size_t>(n));
  double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  return out;
}

}  // namespace lamelab
