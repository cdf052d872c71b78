#include <cmath>
#include <random>

#include "doctest.h"
#include "lamelab/eigen_lab.hpp"
#include "lamelab/errors.hpp"

using namespace lamelab;

namespace {

VectorField random_vfield(const PeriodicGrid& g, int comps, std::uint64_t seed) {
  VectorField f(g, comps);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int j = 0; j < comps; ++j)
    for (auto& v : f.component(j)) v = Cplx(gauss(rng), gauss(rng));
  return f;
}

}  // namespace

TEST_CASE("potential norms") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 8, 0.5);  // unit-measure box
  const int d = 2;
  PotentialField v(g, d);
  // V = c I: norm (sum over d diagonal entries of |c|^s)^{1/s} = |c| d^{1/s}
  for (int j = 0; j < d; ++j)
    for (auto& val : v.entry(j, j)) val = Cplx(0.0, -3.0);
  for (double s : {1.0, 2.0, 5.0})
    CHECK(potential_norm(v, s) == doctest::Approx(3.0 * std::pow(2.0, 1.0 / s)));
  CHECK(potential_norm(v, std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
  // single entry: its own L^s norm; scaling homogeneity
  PotentialField w(g, d);
  for (auto& val : w.entry(0, 1)) val = Cplx(2.0, 0.0);
  CHECK(potential_norm(w, 3.0) == doctest::Approx(2.0));
  PotentialField w2 = w;
  for (auto& val : w2.entry(0, 1)) val *= 2.5;
  CHECK(potential_norm(w2, 3.0) == doctest::Approx(2.5 * potential_norm(w, 3.0)));
  CHECK_THROWS_AS(potential_norm(w, 0.5), DomainError);
}

TEST_CASE("smallness threshold") {
  // d=3, (1/p,1/q) = (2/3,0): t/(C ell 3^{1/3}) at t = 1/2
  double got = smallness_threshold(3, 1.5, std::numeric_limits<double>::infinity(), 1.0,
                                   1.0, 0.5);
  CHECK(got == doctest::Approx(0.5 / std::pow(3.0, 1.0 / 3.0)));
  // linear in t, inverse in ell
  double a = smallness_threshold(2, 1.2, 3.0, 1.0, 1.0, 0.25);
  double b = smallness_threshold(2, 1.2, 3.0, 1.0, 1.0, 0.5);
  CHECK(b == doctest::Approx(2.0 * a));
  double c = smallness_threshold(2, 1.2, 3.0, 2.0, 1.0, 0.25);
  CHECK(c == doctest::Approx(0.5 * a));
  // ell < 1 forbidden on the critical line 1/p - 1/q = 2/d
  CHECK_THROWS_AS(smallness_threshold(3, 1.5, 3.0 / (1.0 + 1e-16), 0.5, 1.0, 0.5),
                  DomainError);
  CHECK_THROWS_AS(smallness_threshold(3, 1.5, 3.0, 1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("holder chain inequality holds on random data") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 16, 4.0);
  const int d = 2;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  const double p = 6.0 / 5.0, q = 3.0;
  for (int trial = 0; trial < 300; ++trial) {
    PotentialField v(g, d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (auto& val : v.entry(j, k)) val = Cplx(gauss(rng), gauss(rng));
    VectorField u = random_vfield(g, d, 1000 + static_cast<std::uint64_t>(trial));
    auto chain = holder_chain_check(v, u, p, q);
    CHECK(chain.lhs <= chain.rhs * (1.0 + 1e-10));
  }
  // equality case: one nonzero component against one matching entry, p = q
  PotentialField v1(g, d);
  for (auto& val : v1.entry(0, 0)) val = Cplx(2.0, 0.0);
  VectorField u1(g, d);
  u1.fill(0, [](const Eigen::VectorXd&) { return Cplx(1.0, 0.0); });
  auto eq = holder_chain_check(v1, u1, 2.0, 2.0);
  // lhs = 2 ||u||_2, rhs = d * 2 * ||u||_2
  CHECK(eq.lhs == doctest::Approx(2.0 * lp_norm(u1, 2.0)));
  CHECK(eq.rhs == doctest::Approx(2.0 * 2.0 * lp_norm(u1, 2.0)));
  CHECK_THROWS_AS(holder_chain_check(v1, u1, 3.0, 2.0), DomainError);
}

TEST_CASE("assembled operator with V = 0 matches the closed-form spectrum") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 8, 4.0, true);
  LameParameters par(1.0, 2.0);
  Eigen::MatrixXcd m = assemble_operator(g, par, nullptr);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * m.cwiseAbs().maxCoeff());
  auto eigs = dense_spectrum(m);
  auto closed = lattice_spectrum(g, par);
  REQUIRE(eigs.size() == closed.size());
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    CHECK(std::abs(eigs[i] - closed[i]) < 1e-10 * (1.0 + std::abs(closed[i])));
    CHECK(eigs[i].imag() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(eigs[i].real() >= -1e-10);
  }
}

TEST_CASE("scalar potential shifts the spectrum exactly") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 4, 3.0, true);
  LameParameters par(1.0, 0.5);
  const Cplx shift(0.7, -0.3);
  PotentialField v(g, 2);
  for (int j = 0; j < 2; ++j)
    for (auto& val : v.entry(j, j)) val = shift;
  auto base = dense_spectrum(assemble_operator(g, par, nullptr));
  auto moved = dense_spectrum(assemble_operator(g, par, &v));
  REQUIRE(base.size() == moved.size());
  // compare as sorted sets after subtracting the shift
  std::vector<Cplx> unshifted;
  for (Cplx e : moved) unshifted.push_back(e - shift);
  std::sort(unshifted.begin(), unshifted.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(std::abs(unshifted[i] - base[i]) < 1e-8 * (1.0 + std::abs(base[i])));
}

TEST_CASE("hermitian potential keeps eigenvalues real and Weyl-close") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 4, 3.0, true);
  LameParameters par(1.0, 1.0);
  PotentialField v(g, 2);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  const auto npts = static_cast<std::size_t>(g.total_points());
  for (std::size_t p = 0; p < npts; ++p) {
    double a = gauss(rng), b = gauss(rng), c = gauss(rng), e = gauss(rng);
    v.entry(0, 0)[p] = Cplx(a, 0.0);
    v.entry(1, 1)[p] = Cplx(b, 0.0);
    v.entry(0, 1)[p] = Cplx(c, e);
    v.entry(1, 0)[p] = Cplx(c, -e);
  }
  Eigen::MatrixXcd m = assemble_operator(g, par, &v);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  auto eigs = dense_spectrum(m);
  for (Cplx e : eigs) CHECK(std::abs(e.imag()) < 1e-8);
  // Weyl: matching distance bounded by the operator norm of V
  auto base = dense_spectrum(assemble_operator(g, par, nullptr));
  double vnorm = potential_norm(v, std::numeric_limits<double>::infinity()) * 2.0;
  for (std::size_t i = 0; i < eigs.size(); ++i)
    CHECK(std::abs(eigs[i] - base[i]) <= vnorm + 1e-8);
}

TEST_CASE("dense cap raises instead of allocating") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 64, 8.0, true);
  LameParameters par(1.0, 2.0);
  CHECK_THROWS_AS(assemble_operator(g, par, nullptr, 6000), DomainError);
}

TEST_CASE("window spectrum agrees with the dense solve near a shift") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 8, 4.0, true);
  LameParameters par(1.0, 2.0);
  PotentialField v = random_potential(g, 2, 31415, 6.0, 0.02);
  auto dense = dense_spectrum(assemble_operator(g, par, &v));
  Cplx center(1.3, 0.4);
  auto window = window_spectrum(g, par, &v, center, 6, 70);
  REQUIRE(window.size() >= 4);
  for (const auto& we : window) {
    if (!we.converged) continue;
    double best = 1e300;
    for (Cplx e : dense) best = std::min(best, std::abs(e - we.value));
    CHECK(best < 1e-6 * (1.0 + std::abs(we.value)));
  }
}

TEST_CASE("eigen report flags the unperturbed spectrum as on-ray") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 8, 4.0, true);
  LameParameters par(1.0, 2.0);
  ExponentPair pq(Rat(1, 2), Rat(1, 2));
  auto rep = eigen_region_report(g, par, nullptr, pq, 1.0, 0.5, 1.0);
  CHECK(rep.entries.size() == static_cast<std::size_t>(2 * g.total_points()));
  for (const auto& e : rep.entries) CHECK(e.flag == "on_ray");
  CHECK(rep.hypothesis_satisfied);  // ||0|| passes any threshold
  CHECK(rep.threshold > 0.0);
}

TEST_CASE("eigen report is deterministic and gates the hypothesis") {
  PeriodicGrid g = PeriodicGrid::isotropic(2, 8, 4.0, true);
  LameParameters par(1.0, 2.0);
  ExponentPair pq(Rat(3, 5), Rat(2, 5));  // inside R2~, s = pq/(q-p) = 5
  double thresh = smallness_threshold(2, 5.0 / 3.0, 5.0 / 2.0, 1.0, 1.0, 0.5);
  PotentialField v = random_potential(g, 2, 2718, 5.0, 0.9 * thresh);
  auto rep1 = eigen_region_report(g, par, &v, pq, 1.0, 0.5, 1.0);
  auto rep2 = eigen_region_report(g, par, &v, pq, 1.0, 0.5, 1.0);
  REQUIRE(rep1.entries.size() == rep2.entries.size());
  for (std::size_t i = 0; i < rep1.entries.size(); ++i) {
    CHECK(rep1.entries[i].value == rep2.entries[i].value);  // bit identical
    CHECK(rep1.entries[i].flag == rep2.entries[i].flag);
  }
  CHECK(rep1.hypothesis_satisfied);
  CHECK(rep1.potential_norm_s <= thresh);
  // a potential violating the threshold still yields a report, stamped
  PotentialField big = random_potential(g, 2, 2718, 5.0, 10.0 * thresh);
  auto rep3 = eigen_region_report(g, par, &big, pq, 1.0, 0.5, 1.0);
  CHECK_FALSE(rep3.hypothesis_satisfied);
  CHECK(!rep3.entries.empty());
  // kappa recorded for off-ray eigenvalues
  bool saw_off_ray = false;
  for (const auto& e : rep3.entries)
    if (e.flag != "on_ray") {
      saw_off_ray = true;
      CHECK(e.kappa_value.has_value());
    }
  CHECK(saw_off_ray);
  // unsupported exponent pair refused
  CHECK_THROWS_AS(eigen_region_report(g, par, &v, ExponentPair(Rat(1, 4), Rat(1, 4)),
                                      1.0, 0.5, 1.0),
                  DomainError);
}
