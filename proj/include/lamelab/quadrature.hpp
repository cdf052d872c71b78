#ifndef LAMELAB_QUADRATURE_HPP
#define LAMELAB_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace lamelab {

using Cplx = std::complex<double>;

// Adaptive Simpson with absolute/relative mixed tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_depth = 40);
Cplx integrate_adaptive_complex(const std::function<Cplx(double)>& f, double a, double b,
                                double tol = 1e-10, int max_depth = 40);

// integral over [a,b] of e^{i omega t} g(t) dt with g interpolated by the
// quadratic through both endpoints and the midpoint. Exact moments keep the
// panel valid for arbitrarily large omega * (b - a).
Cplx filon_panel(double omega, double a, double b, Cplx ga, Cplx gm, Cplx gb);

// Piecewise-Filon integral of e^{i omega t} g(t) over consecutive panels
// [edges[k], edges[k+1]]. Needs strictly increasing edges.
Cplx integrate_oscillatory(const std::function<Cplx(double)>& g, const std::vector<double>& edges,
                           double omega);

// Trapezoid rule on arbitrary increasing nodes.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);
Cplx trapezoid(const std::vector<double>& x, const std::vector<Cplx>& y);

// Node builders.
std::vector<double> linspace(double a, double b, int n);
std::vector<double> geomspace(double a, double b, int n);  // a, b > 0

}  // namespace lamelab

#endif
