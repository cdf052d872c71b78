#include <random>

#include "doctest.h"
#include "lamelab/errors.hpp"
#include "lamelab/field.hpp"

using namespace lamelab;

namespace {

const double kPi = std::acos(-1.0);

VectorField random_field(const PeriodicGrid& g, int comps, std::uint64_t seed) {
  VectorField f(g, comps);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int j = 0; j < comps; ++j)
    for (auto& v : f.component(j)) v = Cplx(gauss(rng), gauss(rng));
  return f;
}

}  // namespace

TEST_CASE("grid bookkeeping") {
  PeriodicGrid g({8, 16}, {4.0, 8.0});
  CHECK(g.total_points() == 128);
  CHECK(g.spacing(0) == doctest::Approx(1.0));
  CHECK(g.spacing(1) == doctest::Approx(1.0));
  CHECK(g.freq_spacing(0) == doctest::Approx(kPi / 4.0));
  CHECK(g.coordinate(0, 0) == doctest::Approx(-4.0));
  CHECK(g.frequency(0, 0) == doctest::Approx(0.0));
  CHECK(g.frequency(0, 4) == doctest::Approx(-kPi));  // wrapped bin
  CHECK_THROWS_AS(PeriodicGrid({12}, {1.0}), DomainError);  // not a power of two
  PeriodicGrid off({8}, {4.0}, true);
  CHECK(off.frequency(0, 0) == doctest::Approx(0.5 * kPi / 4.0));
}

TEST_CASE("transform round trip is the identity") {
  for (bool offset : {false, true}) {
    PeriodicGrid g({16, 32}, {5.0, 7.0}, offset);
    VectorField f = random_field(g, 2, 42);
    VectorField back = transform(transform(f, TransformDirection::Forward),
                                 TransformDirection::Inverse);
    double err = 0.0, scale = 0.0;
    for (int j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < f.component(j).size(); ++p) {
        err = std::max(err, std::abs(back.component(j)[p] - f.component(j)[p]));
        scale = std::max(scale, std::abs(f.component(j)[p]));
      }
    CHECK(err < 1e-12 * scale);
  }
}

TEST_CASE("constant field transforms to the DC bin") {
  PeriodicGrid g({16, 16}, {3.0, 3.0});
  VectorField f(g, 1);
  for (auto& v : f.component(0)) v = 1.0;
  VectorField hat = transform(f, TransformDirection::Forward);
  std::vector<int> idx;
  for (std::int64_t p = 0; p < g.total_points(); ++p) {
    g.unflatten(p, idx);
    bool dc = g.freq_integer(0, idx[0]) == 0 && g.freq_integer(1, idx[1]) == 0;
    double expect = dc ? 36.0 : 0.0;  // (2L)^d at xi = 0
    CHECK(std::abs(hat.component(0)[static_cast<std::size_t>(p)] - expect) < 1e-10);
  }
}

TEST_CASE("gaussian transforms to the analytic gaussian") {
  PeriodicGrid g({128, 128}, {12.0, 12.0});
  VectorField f(g, 1);
  f.fill(0, [](const Eigen::VectorXd& x) { return std::exp(-0.5 * x.squaredNorm()); });
  VectorField hat = transform(f, TransformDirection::Forward);
  std::vector<int> idx;
  for (std::int64_t p = 0; p < g.total_points(); ++p) {
    g.unflatten(p, idx);
    Eigen::Vector2d xi(g.frequency(0, idx[0]), g.frequency(1, idx[1]));
    if (xi.norm() > 3.0) continue;
    double expect = 2.0 * kPi * std::exp(-0.5 * xi.squaredNorm());
    CHECK(std::abs(hat.component(0)[static_cast<std::size_t>(p)] - expect) <
          1e-6 * 2.0 * kPi);
  }
}

TEST_CASE("plancherel identity under the implemented weights") {
  PeriodicGrid g({32, 16}, {6.0, 4.0}, true);
  VectorField f = random_field(g, 3, 5);
  VectorField hat = transform(f, TransformDirection::Forward);
  double lhs = lp_norm(f, 2.0);
  double rhs = std::pow(2.0 * kPi, -1.0) * lp_norm(hat, 2.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("multiplier identities") {
  PeriodicGrid g({32, 32}, {8.0, 8.0}, true);
  VectorField f = random_field(g, 2, 9);
  // identity symbol
  VectorField same = apply_multiplier(f, ScalarSymbol([](const FrequencyPoint&) {
                                        return Cplx(1.0, 0.0);
                                      }));
  for (int j = 0; j < 2; ++j)
    for (std::size_t p = 0; p < f.component(j).size(); ++p)
      CHECK(std::abs(same.component(j)[p] - f.component(j)[p]) < 1e-11);

  // composition m1(D) m2(D) = (m1 m2)(D)
  ScalarSymbol m1 = [](const FrequencyPoint& xi) { return Cplx(1.0 / (1.0 + xi.norm_sq()), 0.0); };
  ScalarSymbol m2 = [](const FrequencyPoint& xi) { return Cplx(0.0, xi.xi1()); };
  VectorField two_step = apply_multiplier(apply_multiplier(f, m2), m1);
  VectorField one_step = apply_multiplier(f, ScalarSymbol([&](const FrequencyPoint& xi) {
                                            return m1(xi) * m2(xi);
                                          }));
  double scale = lp_norm(f, std::numeric_limits<double>::infinity());
  for (int j = 0; j < 2; ++j)
    for (std::size_t p = 0; p < f.component(j).size(); ++p)
      CHECK(std::abs(two_step.component(j)[p] - one_step.component(j)[p]) < 1e-12 * scale);
}

TEST_CASE("leray projector fixes gradient fields on the grid") {
  PeriodicGrid g({32, 32}, {8.0, 8.0}, true);
  // gradient of a smooth periodic-ish bump, built in frequency space
  VectorField hat(g, 2, FieldDomain::Frequency);
  std::vector<int> idx;
  for (std::int64_t p = 0; p < g.total_points(); ++p) {
    g.unflatten(p, idx);
    Eigen::Vector2d xi(g.frequency(0, idx[0]), g.frequency(1, idx[1]));
    Cplx ghat = std::exp(-1.5 * xi.squaredNorm());
    hat.component(0)[static_cast<std::size_t>(p)] = Cplx(0.0, xi[0]) * ghat;
    hat.component(1)[static_cast<std::size_t>(p)] = Cplx(0.0, xi[1]) * ghat;
  }
  VectorField grad = transform(hat, TransformDirection::Inverse);
  VectorField proj = apply_multiplier(grad, MatrixSymbol([](const FrequencyPoint& xi) {
                                        return leray_projector(xi);
                                      }));
  double scale = lp_norm(grad, std::numeric_limits<double>::infinity());
  for (int j = 0; j < 2; ++j)
    for (std::size_t p = 0; p < grad.component(j).size(); ++p)
      CHECK(std::abs(proj.component(j)[p] - grad.component(j)[p]) < 1e-10 * scale);
}

TEST_CASE("resolvent then lame matrix is the identity on fields") {
  PeriodicGrid g({16, 16}, {5.0, 5.0}, true);
  LameParameters par(1.0, 2.0);
  Cplx z(-1.0, 0.5);
  VectorField f = random_field(g, 2, 21);
  VectorField u = apply_multiplier(f, MatrixSymbol([&](const FrequencyPoint& xi) {
                                     return resolvent_symbol(xi, z, par);
                                   }));
  VectorField back = apply_multiplier(u, MatrixSymbol([&](const FrequencyPoint& xi) {
                                        return lame_matrix(xi, z, par);
                                      }));
  double scale = lp_norm(f, std::numeric_limits<double>::infinity());
  for (int j = 0; j < 2; ++j)
    for (std::size_t p = 0; p < f.component(j).size(); ++p)
      CHECK(std::abs(back.component(j)[p] - f.component(j)[p]) < 1e-11 * scale);
}

TEST_CASE("pole on the exact lattice advises the offset") {
  PeriodicGrid g({16, 16}, {8.0, 8.0}, false);  // frequencies hit xi = 0
  VectorField f = random_field(g, 2, 2);
  CHECK_THROWS_AS(apply_multiplier(f, MatrixSymbol([](const FrequencyPoint& xi) {
                                     return leray_projector(xi);
                                   })),
                  ComputeError);
}

TEST_CASE("lp norms of indicator-like fields") {
  PeriodicGrid g({16, 16}, {4.0, 4.0});
  double h = g.spacing(0);
  VectorField f(g, 1);
  f.component(0)[5] = Cplx(3.0, 0.0);  // single-cell spike
  for (double p : {1.0, 2.0, 4.0})
    CHECK(lp_norm(f, p) == doctest::Approx(3.0 * std::pow(h * h, 1.0 / p)));
  CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
  // k cells of value 1
  VectorField ind(g, 1);
  for (int k = 0; k < 7; ++k) ind.component(0)[static_cast<std::size_t>(k)] = 1.0;
  for (double p : {1.0, 2.0, 3.0})
    CHECK(lp_norm(ind, p) == doctest::Approx(std::pow(7.0 * h * h, 1.0 / p)));
}

TEST_CASE("vector norm convention pools components") {
  PeriodicGrid g({8, 8}, {2.0, 2.0});
  VectorField f(g, 2);
  f.component(0)[0] = 1.0;
  f.component(1)[1] = 1.0;
  double w = g.cell_measure();
  CHECK(lp_norm(f, 3.0) == doctest::Approx(std::pow(2.0 * w, 1.0 / 3.0)));
}

TEST_CASE("lorentz norms") {
  PeriodicGrid g({16, 16}, {4.0, 4.0});
  double w = g.cell_measure();
  // lambda * indicator of E: L^{q,inf} = L^{q,1} = lambda |E|^{1/q}
  VectorField f(g, 1);
  int cells = 9;
  for (int k = 0; k < cells; ++k) f.component(0)[static_cast<std::size_t>(k)] = Cplx(0.0, 2.5);
  double meas = cells * w;
  for (double q : {1.0, 2.0, 3.5}) {
    CHECK(lorentz_norm(f, q, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(2.5 * std::pow(meas, 1.0 / q)));
    CHECK(lorentz_norm(f, q, 1.0) == doctest::Approx(2.5 * std::pow(meas, 1.0 / q)));
  }
  // chebyshev: weak norm below strong norm; permutation invariance
  VectorField r = f;
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    auto& comp = r.component(0);
    for (auto& v : comp) v = Cplx(std::normal_distribution<double>()(rng), 0.0);
    double weak = lorentz_norm(r, 2.0, std::numeric_limits<double>::infinity());
    double strong = lp_norm(r, 2.0);
    CHECK(weak <= strong * (1.0 + 1e-12));
    std::reverse(comp.begin(), comp.end());
    CHECK(lorentz_norm(r, 2.0, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(weak));
  }
}

TEST_CASE("restricted ratio basics") {
  PeriodicGrid g({16, 16}, {4.0, 4.0}, true);
  VectorField f = random_field(g, 1, 77);
  GridMask full = full_mask(g);
  // constant symbol c on the full grid: ratio = |c| ||f||_q / ||f||_p
  double r = restricted_ratio(ScalarSymbol([](const FrequencyPoint&) { return Cplx(0.0, 2.0); }),
                              f, 2.0, 2.0, full);
  CHECK(r == doctest::Approx(2.0).epsilon(1e-10));
  double r14 = restricted_ratio(ScalarSymbol([](const FrequencyPoint&) { return Cplx(3.0, 0.0); }),
                                f, 1.0, 4.0, full);
  CHECK(r14 == doctest::Approx(3.0 * lp_norm(f, 4.0) / lp_norm(f, 1.0)).epsilon(1e-10));

  // p = q = 2 with full mask never beats sup |symbol| (Plancherel)
  ScalarSymbol sym = [](const FrequencyPoint& xi) {
    return Cplx(1.0 / (1.0 + xi.norm_sq()), 0.0);
  };
  for (std::uint64_t s : {1ull, 2ull, 3ull}) {
    VectorField rf = random_field(g, 1, s);
    CHECK(restricted_ratio(sym, rf, 2.0, 2.0, full) <= 1.0 + 1e-10);
  }

  VectorField zero(g, 1);
  CHECK_THROWS_AS(restricted_ratio(sym, zero, 2.0, 2.0, full), DomainError);
}

TEST_CASE("box masks measure what they cover") {
  PeriodicGrid g({16, 16}, {4.0, 4.0});
  GridMask m = box_mask(g, {1.0, 2.0});
  double meas = mask_measure(g, m);
  // half-open grid boxes make the count predictable: coordinates in
  // [-1,1] x [-2,2] inclusive at spacing 1/2
  CHECK(meas == doctest::Approx(5 * 9 * g.cell_measure()));
}
