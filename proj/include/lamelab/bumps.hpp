#ifndef LAMELAB_BUMPS_HPP
#define LAMELAB_BUMPS_HPP

#include <string>

namespace lamelab {

// Named smooth cutoff profiles. The constructions only pin down plateau and
// support intervals; the concrete profiles below are fixed so that every
// experiment is reproducible. Version bumps whenever any profile changes.
namespace bumps {

inline constexpr const char* kProfileVersion = "1";

// C^inf monotone step: 0 for s <= 0, 1 for s >= 1.
double smoothstep(double s);

// phi: even, = 1 on [-1/2,1/2], supported in [-1,1].
double phi(double t);

// psi: supported in [1/4,1], = 1 on [1/2,3/4].
double psi(double t);

// chi: radial cutoff, = 1 for r <= 1/20, supported in r <= 1/10.
double chi(double r);

// phi_plateau(t; eps): even, = 1 on [-eps,eps], supported in [-2 eps, 2 eps].
double phi_plateau(double t, double eps);

// Annulus/low-pass profile: = 1 for |t| <= 1, vanishing for |t| >= 2,
// radially nonincreasing.
double lowpass(double t);

// Off-center profile: supported in (1/2,2), = 1 on [2/3,3/2].
double band(double t);

// One-sided profile on [0,2): = 1 on [0,1], vanishing at 2.
double shelf(double t);

}  // namespace bumps
}  // namespace lamelab

#endif
