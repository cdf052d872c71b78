#ifndef LAMELAB_EXPONENT_GEOMETRY_HPP
#define LAMELAB_EXPONENT_GEOMETRY_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "lamelab/rational.hpp"

namespace lamelab {

// A point (1/p, 1/q) of the unit square I^2. x and y are the reciprocals,
// so x = 0 means p = infinity.
struct ExponentPair {
  Rat x;
  Rat y;

  ExponentPair(Rat x_, Rat y_);
  bool operator==(const ExponentPair& o) const { return x == o.x && y == o.y; }
  bool operator!=(const ExponentPair& o) const { return !(*this == o); }
};

// (x,y)' = (1-y, 1-x). An involution of I^2.
ExponentPair dual_point(const ExponentPair& p);

enum class RegionTag {
  R1,
  R2Tilde,
  R3Tilde,
  R3TildePrime,
  OnSegmentBBPrime,
  OnCriticalEndpointB,
  OnCriticalEndpointBPrime,
  InsideR0Unclassified,
  OutsideR0,
};

std::string to_string(RegionTag tag);
RegionTag region_tag_from_string(const std::string& name);

// The named points of the exponent square. Keys: "A" (d >= 3 only), "B",
// "D", "E", "H", "Pstar", "Pcirc". Primed points are duals.
std::map<std::string, ExponentPair> canonical_points(int d);

// Single named point; name may carry a trailing ' for the dual ("B'").
ExponentPair canonical_point(int d, const std::string& name);

// Membership in the admissible range R_0.
bool in_admissible_range(int d, const ExponentPair& p);

// Deterministic exact classification against the region decomposition of
// the exponent square. The critical segment [B,B'] reports its own tags.
RegionTag classify(int d, const ExponentPair& p);

// gamma_{p,q} = max{0, 1-(d+1)/2 (x-y), (d+1)/2 - d x, d y - (d-1)/2}.
Rat gamma_exponent(int d, const ExponentPair& p);

// The |z|-power of kappa: -1 + d/2 (x-y).
Rat kappa_abs_exponent(int d, const ExponentPair& p);

struct BoundProfile {
  Rat gamma;
  Rat kappa_exponent;
};
BoundProfile bound_profile(int d, const ExponentPair& p);

// dist(w, [0,inf)) for w != 0: |Im w| when Re w >= 0, else |w|.
double dist_to_ray(std::complex<double> w);

// kappa_{p,q}(z) = |z|^(-1 + d(x-y)/2) * dist(z/|z|, [0,inf))^(-gamma).
// Requires z off the ray [0,inf).
double kappa(int d, const ExponentPair& p, std::complex<double> z);

// z in Z_{p,q}(ell) <=> kappa(z) <= ell. Only defined when (1/p,1/q) lies
// in one of the four regions carrying the two-sided resolvent bound.
bool zregion_contains(int d, const ExponentPair& p, double ell, std::complex<double> z);

// Closed polygonal boundary of a named region. vertex_in_region[i] and
// edge_in_region[i] (edge i runs vertices[i] -> vertices[i+1], cyclically)
// record which boundary pieces belong to the region.
struct RegionPolyline {
  std::vector<ExponentPair> vertices;
  std::vector<bool> vertex_in_region;
  std::vector<bool> edge_in_region;
};
RegionPolyline region_polyline(int d, RegionTag tag);

// Sampled boundary of Z_{p,q}(ell), polar solve of kappa = ell.
// For the radially neutral case -1 + d(x-y)/2 = 0 the boundary is a pair
// of rays; samples then run along both rays.
std::vector<std::complex<double>> zregion_boundary(int d, const ExponentPair& p, double ell,
                                                   int samples = 720);

// L^p operator norm of a Riesz transform, tan(pi / (2 min{p, p'})).
double riesz_transform_norm(double p);

// Explicit constant of the resolvent upper bound,
// mu^(-d/2 (x-y)) + ((lambda+2mu)^(-d/2 (x-y)) + mu^(-d/2 (x-y))) tan^2(...).
double resolvent_upper_constant(int d, const ExponentPair& p, double mu, double lambda);

}  // namespace lamelab

#endif
