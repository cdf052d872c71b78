#include "lamelab/bumps.hpp"

#include <cmath>

namespace lamelab {
namespace bumps {

namespace {
double edge(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}  // namespace

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = edge(s);
  double b = edge(1.0 - s);
  return a / (a + b);
}

double phi(double t) { return smoothstep((1.0 - std::abs(t)) / 0.5); }

double psi(double t) { return smoothstep(4.0 * (t - 0.25)) * smoothstep(4.0 * (1.0 - t)); }

double chi(double r) { return smoothstep((0.1 - std::abs(r)) / 0.05); }

double phi_plateau(double t, double eps) {
  return smoothstep((2.0 * eps - std::abs(t)) / eps);
}

double lowpass(double t) { return smoothstep(2.0 - std::abs(t)); }

double band(double t) {
  return smoothstep((t - 0.5) * 6.0) * smoothstep((2.0 - t) * 2.0);
}

double shelf(double t) { return smoothstep(2.0 - t); }

}  // namespace bumps
}  // namespace lamelab
