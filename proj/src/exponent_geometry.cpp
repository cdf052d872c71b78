#include "lamelab/exponent_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "lamelab/errors.hpp"

namespace lamelab {

namespace {

void check_dim(int d) {
  if (d < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(d));
  if (d > 64) throw DomainError("dimension too large for exact arithmetic: " + std::to_string(d));
}

Rat cross(const ExponentPair& o, const ExponentPair& a, const ExponentPair& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_closed_segment(const ExponentPair& a, const ExponentPair& b, const ExponentPair& p) {
  if (cross(a, b, p) != Rat(0)) return false;
  Rat lox = std::min(a.x, b.x), hix = std::max(a.x, b.x);
  Rat loy = std::min(a.y, b.y), hiy = std::max(a.y, b.y);
  return lox <= p.x && p.x <= hix && loy <= p.y && p.y <= hiy;
}

bool on_open_segment(const ExponentPair& a, const ExponentPair& b, const ExponentPair& p) {
  return on_closed_segment(a, b, p) && p != a && p != b;
}

// Convex polygon with per-vertex and per-edge(interior) membership flags.
struct Region {
  std::vector<ExponentPair> verts;
  std::vector<bool> vflag;
  std::vector<bool> eflag;

  void push(ExponentPair v, bool vin, bool ein_to_next) {
    // Regions can degenerate for small d (repeated corner points); collapse
    // duplicates, keeping the more restrictive membership.
    if (!verts.empty() && verts.back() == v) {
      vflag.back() = vflag.back() && vin;
      eflag.back() = ein_to_next;
      return;
    }
    verts.push_back(v);
    vflag.push_back(vin);
    eflag.push_back(ein_to_next);
  }

  void finish() {
    if (verts.size() > 1 && verts.front() == verts.back()) {
      vflag.front() = vflag.front() && vflag.back();
      verts.pop_back();
      vflag.pop_back();
      eflag.pop_back();
    }
  }

  enum class Where { Outside, Inside, OnVertex, OnEdge };
  struct Hit {
    Where where;
    std::size_t index = 0;
  };

  Hit locate(const ExponentPair& p) const {
    const std::size_t n = verts.size();
    // Polygon orientation from the signed area (vertex order is as named in
    // the region definitions, not normalized).
    Rat area(0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = verts[i];
      const auto& b = verts[(i + 1) % n];
      area += a.x * b.y - b.x * a.y;
    }
    const int orient = area > Rat(0) ? 1 : -1;

    for (std::size_t i = 0; i < n; ++i) {
      if (p == verts[i]) return {Where::OnVertex, i};
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rat c = cross(verts[i], verts[(i + 1) % n], p);
      if (orient > 0 ? c < Rat(0) : c > Rat(0)) return {Where::Outside, 0};
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (on_open_segment(verts[i], verts[(i + 1) % n], p)) return {Where::OnEdge, i};
    }
    return {Where::Inside, 0};
  }

  bool contains(const ExponentPair& p) const {
    Hit h = locate(p);
    switch (h.where) {
      case Where::Outside: return false;
      case Where::Inside: return true;
      case Where::OnVertex: return vflag[h.index];
      case Where::OnEdge: return eflag[h.index];
    }
    return false;
  }
};

ExponentPair point_A(int d) {
  if (d < 3) throw DomainError("point A is undefined for d = 2");
  return ExponentPair(Rat(d + 1, 2 * d), Rat(d - 3, 2 * d));
}
ExponentPair point_B(int d) {
  return ExponentPair(Rat(d + 1, 2 * d), Rat((d - 1) * (d - 1), 2 * d * (d + 1)));
}
ExponentPair point_D(int d) { return ExponentPair(Rat(d - 1, 2 * d), Rat(d - 1, 2 * d)); }
ExponentPair point_E(int d) { return ExponentPair(Rat(d + 1, 2 * d), Rat(0)); }
ExponentPair point_H() { return ExponentPair(Rat(1, 2), Rat(1, 2)); }

ExponentPair point_Pstar(int d) {
  Rat v = (d % 2 == 1) ? Rat(3 * (d - 1), 2 * (3 * d + 1)) : Rat(3 * d - 2, 2 * (3 * d + 2));
  return ExponentPair(v, v);
}

ExponentPair point_Pcirc(int d) {
  if (d % 2 == 1) {
    Rat den(2 * (d * d + 4 * d - 1));
    return ExponentPair(Rat((d + 5) * (d - 1), 1) / den, Rat((d - 1) * (d + 3), 1) / den);
  }
  Rat den(2 * (d * d + 3 * d - 2));
  return ExponentPair(Rat(d * d + 3 * d - 6, 1) / den, Rat((d - 1) * (d + 2), 1) / den);
}

Region region_r1(int d) {
  Region r;
  if (d == 2) {
    ExponentPair B = point_B(2), E = point_E(2), one0(Rat(1), Rat(0));
    ExponentPair Ep = dual_point(E), Bp = dual_point(B);
    r.push(B, false, false);    // [B,E] removed
    r.push(E, false, true);
    r.push(one0, false, true);  // the corner (1,0) itself removed
    r.push(Ep, false, false);   // [B',E'] removed
    r.push(Bp, false, true);
    r.finish();
    return r;
  }
  ExponentPair A = point_A(d), B = point_B(d);
  ExponentPair Ap = dual_point(A), Bp = dual_point(B);
  r.push(A, false, false);  // [A,B] removed
  r.push(B, false, true);
  r.push(Bp, false, false);  // [A',B'] removed
  r.push(Ap, false, true);
  r.finish();
  return r;
}

Region region_r2t(int d) {
  ExponentPair B = point_B(d), Bp = dual_point(B);
  ExponentPair Pc = point_Pcirc(d), Pcp = dual_point(Pc), H = point_H();
  Region r;
  r.push(B, false, false);  // [B,B'] removed
  r.push(Bp, false, true);
  r.push(Pcp, false, false);  // [Pcirc',H) removed, H itself kept
  r.push(H, true, false);     // [Pcirc,H) removed
  r.push(Pc, false, true);
  r.finish();
  return r;
}

Region region_r3t(int d) {
  Region r;
  ExponentPair origin(Rat(0), Rat(0));
  if (d == 2) {
    ExponentPair E = point_E(2), B = point_B(2), D = point_D(2);
    r.push(origin, true, true);
    r.push(E, false, false);  // [B,E] removed
    r.push(B, false, false);  // [B,D] removed
    r.push(D, false, true);
    r.finish();
    return r;
  }
  ExponentPair corner(Rat(2, d), Rat(0));
  ExponentPair A = point_A(d), B = point_B(d), Pc = point_Pcirc(d), Ps = point_Pstar(d);
  r.push(origin, true, true);
  r.push(corner, false, true);  // the corner (2/d,0) itself removed
  r.push(A, false, false);      // [A,B] removed
  r.push(B, false, false);      // [B,Pcirc] removed
  r.push(Pc, false, false);     // [Pcirc,Pstar] removed
  r.push(Ps, false, true);
  r.finish();
  return r;
}

}  // namespace

ExponentPair::ExponentPair(Rat x_, Rat y_) : x(x_), y(y_) {
  if (x < Rat(0) || x > Rat(1) || y < Rat(0) || y > Rat(1))
    throw DomainError("exponent pair (" + lamelab::to_string(x) + "," + lamelab::to_string(y) +
                      ") outside the unit square");
}

ExponentPair dual_point(const ExponentPair& p) {
  return ExponentPair(Rat(1) - p.y, Rat(1) - p.x);
}

std::string to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::R1: return "R1";
    case RegionTag::R2Tilde: return "R2tilde";
    case RegionTag::R3Tilde: return "R3tilde";
    case RegionTag::R3TildePrime: return "R3tildePrime";
    case RegionTag::OnSegmentBBPrime: return "OnSegmentBBprime";
    case RegionTag::OnCriticalEndpointB: return "OnCriticalEndpointB";
    case RegionTag::OnCriticalEndpointBPrime: return "OnCriticalEndpointBprime";
    case RegionTag::InsideR0Unclassified: return "InsideR0Unclassified";
    case RegionTag::OutsideR0: return "OutsideR0";
  }
  return "?";
}

RegionTag region_tag_from_string(const std::string& name) {
  static const std::map<std::string, RegionTag> table = {
      {"R1", RegionTag::R1},
      {"R2tilde", RegionTag::R2Tilde},
      {"R3tilde", RegionTag::R3Tilde},
      {"R3tildePrime", RegionTag::R3TildePrime},
      {"OnSegmentBBprime", RegionTag::OnSegmentBBPrime},
      {"OnCriticalEndpointB", RegionTag::OnCriticalEndpointB},
      {"OnCriticalEndpointBprime", RegionTag::OnCriticalEndpointBPrime},
      {"InsideR0Unclassified", RegionTag::InsideR0Unclassified},
      {"OutsideR0", RegionTag::OutsideR0},
  };
  auto it = table.find(name);
  if (it == table.end()) throw DomainError("unknown region tag: " + name);
  return it->second;
}

std::map<std::string, ExponentPair> canonical_points(int d) {
  check_dim(d);
  std::map<std::string, ExponentPair> out;
  if (d >= 3) out.emplace("A", point_A(d));
  out.emplace("B", point_B(d));
  out.emplace("D", point_D(d));
  out.emplace("E", point_E(d));
  out.emplace("H", point_H());
  out.emplace("Pstar", point_Pstar(d));
  out.emplace("Pcirc", point_Pcirc(d));
  return out;
}

ExponentPair canonical_point(int d, const std::string& name) {
  check_dim(d);
  bool prime = !name.empty() && name.back() == '\'';
  std::string base = prime ? name.substr(0, name.size() - 1) : name;
  auto pts = canonical_points(d);
  auto it = pts.find(base);
  if (it == pts.end()) throw DomainError("unknown canonical point " + name +
                                         (base == "A" ? " (A is undefined for d = 2)" : ""));
  return prime ? dual_point(it->second) : it->second;
}

bool in_admissible_range(int d, const ExponentPair& p) {
  check_dim(d);
  Rat diff = p.x - p.y;
  if (d == 2) return Rat(0) <= diff && diff < Rat(1);
  if (diff < Rat(0) || diff > Rat(2, d)) return false;
  if (p == ExponentPair(Rat(1), Rat(d - 2, d))) return false;
  if (p == ExponentPair(Rat(2, d), Rat(0))) return false;
  return true;
}

RegionTag classify(int d, const ExponentPair& p) {
  check_dim(d);
  if (!in_admissible_range(d, p)) return RegionTag::OutsideR0;
  ExponentPair B = point_B(d), Bp = dual_point(B);
  if (p == B) return RegionTag::OnCriticalEndpointB;
  if (p == Bp) return RegionTag::OnCriticalEndpointBPrime;
  if (on_open_segment(B, Bp, p)) return RegionTag::OnSegmentBBPrime;
  if (region_r1(d).contains(p)) return RegionTag::R1;
  if (region_r2t(d).contains(p)) return RegionTag::R2Tilde;
  if (region_r3t(d).contains(p)) return RegionTag::R3Tilde;
  if (region_r3t(d).contains(dual_point(p))) return RegionTag::R3TildePrime;
  return RegionTag::InsideR0Unclassified;
}

Rat gamma_exponent(int d, const ExponentPair& p) {
  check_dim(d);
  Rat t1(0);
  Rat t2 = Rat(1) - Rat(d + 1, 2) * (p.x - p.y);
  Rat t3 = Rat(d + 1, 2) - Rat(d) * p.x;
  Rat t4 = Rat(d) * p.y - Rat(d - 1, 2);
  return std::max({t1, t2, t3, t4});
}

Rat kappa_abs_exponent(int d, const ExponentPair& p) {
  check_dim(d);
  return Rat(-1) + Rat(d, 2) * (p.x - p.y);
}

BoundProfile bound_profile(int d, const ExponentPair& p) {
  return {gamma_exponent(d, p), kappa_abs_exponent(d, p)};
}

double dist_to_ray(std::complex<double> w) {
  if (w == std::complex<double>(0.0, 0.0)) throw DomainError("dist_to_ray: w must be nonzero");
  if (w.real() >= 0.0) return std::abs(w.imag());
  return std::abs(w);
}

namespace {
void check_off_ray(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw DomainError("spectral parameter z lies on the ray [0,inf)");
}
}  // namespace

double kappa(int d, const ExponentPair& p, std::complex<double> z) {
  check_dim(d);
  check_off_ray(z);
  double az = std::abs(z);
  double e = to_double(kappa_abs_exponent(d, p));
  double g = to_double(gamma_exponent(d, p));
  return std::pow(az, e) * std::pow(dist_to_ray(z / az), -g);
}

bool zregion_contains(int d, const ExponentPair& p, double ell, std::complex<double> z) {
  RegionTag tag = classify(d, p);
  if (tag != RegionTag::R1 && tag != RegionTag::R2Tilde && tag != RegionTag::R3Tilde &&
      tag != RegionTag::R3TildePrime)
    throw DomainError("Z_{p,q} is defined only on the four resolvent regions; (" +
                      lamelab::to_string(p.x) + "," + lamelab::to_string(p.y) + ") is " +
                      lamelab::to_string(tag));
  if (ell <= 0.0) throw DomainError("Z_{p,q}(ell) requires ell > 0");
  return kappa(d, p, z) <= ell;
}

RegionPolyline region_polyline(int d, RegionTag tag) {
  check_dim(d);
  Region r;
  switch (tag) {
    case RegionTag::R1: r = region_r1(d); break;
    case RegionTag::R2Tilde: r = region_r2t(d); break;
    case RegionTag::R3Tilde: r = region_r3t(d); break;
    case RegionTag::R3TildePrime: {
      Region base = region_r3t(d);
      // Duality reflects across the antidiagonal; flags carry over.
      for (auto& v : base.verts) v = dual_point(v);
      r = base;
      break;
    }
    default:
      throw DomainError("no polyline for tag " + lamelab::to_string(tag));
  }
  return {r.verts, r.vflag, r.eflag};
}

std::vector<std::complex<double>> zregion_boundary(int d, const ExponentPair& p, double ell,
                                                   int samples) {
  RegionTag tag = classify(d, p);
  if (tag != RegionTag::R1 && tag != RegionTag::R2Tilde && tag != RegionTag::R3Tilde &&
      tag != RegionTag::R3TildePrime)
    throw DomainError("Z_{p,q} boundary requested outside the four resolvent regions");
  if (ell <= 0.0) throw DomainError("Z boundary requires ell > 0");
  if (samples < 8) throw DomainError("Z boundary needs at least 8 samples");

  const double e = to_double(kappa_abs_exponent(d, p));
  const double g = to_double(gamma_exponent(d, p));
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(samples));

  if (e != 0.0) {
    // kappa(r e^{i t}) = r^e D(t)^{-g} is strictly monotone in r; solve for r.
    const double pi = std::acos(-1.0);
    for (int k = 1; k <= samples; ++k) {
      double t = 2.0 * pi * k / (samples + 1);
      double dist = (std::cos(t) >= 0.0) ? std::abs(std::sin(t)) : 1.0;
      if (dist <= 0.0) continue;
      double r = std::pow(ell * std::pow(dist, g), 1.0 / e);
      out.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    return out;
  }

  // Radially neutral case (x - y = 2/d): membership depends on the angle
  // alone and the boundary, when nonempty, is a pair of rays.
  if (g == 0.0)
    throw DomainError("kappa is constant for this exponent pair; Z has no boundary curve");
  double dist0 = std::pow(ell, -1.0 / g);
  if (dist0 > 1.0)
    throw DomainError("Z_{p,q}(ell) is empty for this exponent pair and ell");
  double t0 = std::asin(dist0);
  int half = samples / 2;
  for (int k = 0; k < half; ++k) {
    double r = std::pow(10.0, -2.0 + 4.0 * k / (half - 1.0));
    out.emplace_back(r * std::cos(t0), r * std::sin(t0));
  }
  for (int k = 0; k < half; ++k) {
    double r = std::pow(10.0, -2.0 + 4.0 * k / (half - 1.0));
    out.emplace_back(r * std::cos(t0), -r * std::sin(t0));
  }
  return out;
}

double riesz_transform_norm(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw DomainError("Riesz transform norm requires 1 < p < inf");
  double pdual = p / (p - 1.0);
  double m = std::min(p, pdual);
  const double pi = std::acos(-1.0);
  return std::tan(pi / (2.0 * m));
}

double resolvent_upper_constant(int d, const ExponentPair& p, double mu, double lambda) {
  check_dim(d);
  if (p.x == Rat(0) || p.x == Rat(1))
    throw DomainError("upper bound constant requires 1 < p < inf");
  double expo = -to_double(Rat(d, 2) * (p.x - p.y));
  double t = riesz_transform_norm(1.0 / to_double(p.x));
  double mpow = std::pow(mu, expo);
  double lpow = std::pow(lambda + 2.0 * mu, expo);
  return mpow + (lpow + mpow) * t * t;
}

}  // namespace lamelab
