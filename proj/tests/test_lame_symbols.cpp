#include <random>

#include "doctest.h"
#include "lamelab/errors.hpp"
#include "lamelab/lame_symbols.hpp"

using namespace lamelab;
using std::complex_literals::operator""i;

namespace {

FrequencyPoint fp(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<long>(v.size()));
  int k = 0;
  for (double c : v) x[k++] = c;
  return FrequencyPoint(x);
}

double inf_norm(const SymbolMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("lame parameter validation and rho") {
  CHECK_THROWS_AS(LameParameters(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(LameParameters(1.0, -2.0), DomainError);
  CHECK(LameParameters(1.0, 2.0).rho() == doctest::Approx(4.0));
  CHECK(LameParameters(2.0, -2.0).rho() == doctest::Approx(1.0));  // lambda + mu = 0
}

TEST_CASE("lame matrix closed forms") {
  LameParameters par(1.0, 2.0);
  // xi = 0: rank-one term drops, matrix is -z I
  SymbolMatrix m0 = lame_matrix(fp({0.0, 0.0, 0.0}), -1.0 + 0.0i, par);
  CHECK(inf_norm(m0 - SymbolMatrix::Identity(3, 3)) < 1e-15);
  // xi = e_1, z = -mu: 2 mu I + (lambda+mu) e1 e1^t
  SymbolMatrix m1 = lame_matrix(fp({1.0, 0.0, 0.0}), Cplx(-1.0, 0.0), par);
  SymbolMatrix want = 2.0 * SymbolMatrix::Identity(3, 3);
  want(0, 0) += 3.0;
  CHECK(inf_norm(m1 - want) < 1e-15);
  // degenerate lambda + mu = 0: scalar case
  LameParameters scalar(2.0, -2.0);
  SymbolMatrix ms = lame_matrix(fp({0.3, -0.4}), 0.5 + 0.25i, scalar);
  Cplx diag = 2.0 * 0.25 - Cplx(0.5, 0.25);
  CHECK(inf_norm(ms - diag * SymbolMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("resolvent symbol inverts the lame matrix") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    int d = 2 + static_cast<int>(rng() % 3);
    Eigen::VectorXd xi(d);
    for (int k = 0; k < d; ++k) xi[k] = unif(rng);
    if (xi.norm() < 0.1) continue;
    double mu = 0.5 + std::abs(unif(rng));
    double lambda = unif(rng);
    if (!(lambda + 2 * mu > 0.2)) continue;
    LameParameters par(mu, lambda);
    Cplx z(unif(rng), unif(rng) + (rng() % 2 == 0 ? 2.5 : -2.5));
    FrequencyPoint f(xi);
    SymbolMatrix inv = resolvent_symbol(f, z, par);
    SymbolMatrix prod = lame_matrix(f, z, par) * inv;
    CHECK(inf_norm(prod - SymbolMatrix::Identity(d, d)) < 1e-12);
    // oracle: numeric inversion agrees with the closed form
    SymbolMatrix numeric = lame_matrix(f, z, par).inverse();
    CHECK(inf_norm(numeric - inv) < 1e-10 * std::max(1.0, inf_norm(numeric)));
  }
}

TEST_CASE("resolvent symbol hand values") {
  // mu=1, xi=e_1, z=-1: diag(1/(lambda+3), 1/2, 1/2)
  LameParameters par(1.0, 2.0);
  SymbolMatrix m = resolvent_symbol(fp({1.0, 0.0, 0.0}), Cplx(-1.0, 0.0), par);
  CHECK(std::abs(m(0, 0) - Cplx(1.0 / 5.0, 0.0)) < 1e-15);
  CHECK(std::abs(m(1, 1) - Cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(m(2, 2) - Cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(m(0, 1)) < 1e-15);
  // scalar reduction
  LameParameters scalar(1.5, -1.5);
  SymbolMatrix s = resolvent_symbol(fp({0.2, 0.7}), 0.3 + 2.0i, scalar);
  Cplx want = 1.0 / (1.5 * (0.04 + 0.49) - Cplx(0.3, 2.0));
  CHECK(std::abs(s(0, 0) - want) < 1e-15);
  CHECK(std::abs(s(0, 1)) < 1e-15);
  // poles
  CHECK_THROWS_AS(resolvent_symbol(fp({0.0, 0.0}), Cplx(-1.0, 0.0), par), PoleError);
  CHECK_THROWS_AS(resolvent_symbol(fp({1.0, 0.0}), Cplx(1.0, 0.0), par), PoleError);
}

TEST_CASE("resolvent evenness") {
  LameParameters par(1.0, 2.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd xi(3);
    xi << unif(rng), unif(rng), unif(rng);
    if (xi.norm() < 0.1) continue;
    Cplx z(unif(rng), 2.0);
    Eigen::VectorXd neg = -xi;
    CHECK(inf_norm(resolvent_symbol(FrequencyPoint(xi), z, par) -
                   resolvent_symbol(FrequencyPoint(neg), z, par)) < 1e-14);
  }
}

TEST_CASE("leray projector identities") {
  SymbolMatrix p = leray_projector(fp({1.0, 0.0, 0.0}));
  SymbolMatrix want = SymbolMatrix::Zero(3, 3);
  want(0, 0) = 1.0;
  CHECK(inf_norm(p - want) < 1e-15);
  SymbolMatrix p2 = leray_projector(fp({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
  CHECK(inf_norm(p2 - 0.5 * SymbolMatrix::Ones(2, 2)) < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd xi(3);
    xi << unif(rng), unif(rng), unif(rng);
    if (xi.norm() < 0.1) continue;
    SymbolMatrix pi = leray_projector(FrequencyPoint(xi));
    CHECK(inf_norm(pi * pi - pi) < 1e-14);
    CHECK(inf_norm(pi - pi.transpose()) < 1e-14);
    CHECK(std::abs(pi.trace() - Cplx(1.0, 0.0)) < 1e-14);
  }
  CHECK_THROWS_AS(leray_projector(fp({0.0, 0.0})), PoleError);
}

TEST_CASE("helmholtz decomposition identity") {
  LameParameters par(1.0, 2.0);
  auto [s, p] = helmholtz_factors(fp({1.0, 0.0}), Cplx(-1.0, 0.0), par);
  CHECK(std::abs(s - Cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(p - Cplx(0.2, 0.0)) < 1e-15);
  // rho = 1 collapses the factors
  LameParameters scalar(1.0, -1.0);
  auto [s2, p2] = helmholtz_factors(fp({0.4, 0.3}), 0.1 + 1.0i, scalar);
  CHECK(std::abs(s2 - p2) < 1e-15);
  // residual oracle: resolvent == s (I - Pi) + p Pi entrywise
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int t = 0; t < 500; ++t) {
    int d = 2 + static_cast<int>(rng() % 2);
    Eigen::VectorXd xi(d);
    for (int k = 0; k < d; ++k) xi[k] = unif(rng);
    if (xi.norm() < 0.1) continue;
    FrequencyPoint f(xi);
    Cplx z(unif(rng), 1.5);
    auto [sh, pr] = helmholtz_factors(f, z, par);
    SymbolMatrix pi = leray_projector(f);
    SymbolMatrix combo = sh * (SymbolMatrix::Identity(d, d) - pi) + pr * pi;
    CHECK(inf_norm(combo - resolvent_symbol(f, z, par)) < 1e-12);
  }
}

TEST_CASE("riesz symbol") {
  CHECK(std::abs(riesz_symbol(0, fp({1.0, 0.0})) - 1.0i) < 1e-15);
  CHECK(std::abs(riesz_symbol(1, fp({1.0, 0.0}))) < 1e-15);
  Cplx r1 = riesz_symbol(0, fp({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
  CHECK(std::abs(r1 * r1 - Cplx(-0.5, 0.0)) < 1e-15);
  CHECK_THROWS_AS(riesz_symbol(0, fp({0.0, 0.0})), PoleError);
  CHECK_THROWS_AS(riesz_symbol(5, fp({1.0, 0.0})), DomainError);
}

TEST_CASE("imaginary-part symbol values") {
  double rho = 2.0, delta = 1.0 / 64.0;
  // normalized at xi = e_1: the shifted channel peaks exactly
  auto v = imag_symbol(fp({1.0, 0.0, 0.0}), delta, rho, ImagVariant::Normalized);
  CHECK(v.shifted == doctest::Approx(1.0 / delta));
  CHECK(v.sphere == doctest::Approx(0.0));
  // normalized at xi = e_d
  auto w = imag_symbol(fp({0.0, 0.0, 1.0}), delta, rho, ImagVariant::Normalized);
  double want = delta / ((1.0 / rho - 1.0) * (1.0 / rho - 1.0) + delta * delta);
  CHECK(w.sphere == doctest::Approx(want));
  CHECK(w.shifted == doctest::Approx(0.0));
  // evenness
  auto a = imag_symbol(fp({0.3, -0.7, 0.2}), delta, rho, ImagVariant::Raw);
  auto b = imag_symbol(fp({-0.3, 0.7, -0.2}), delta, rho, ImagVariant::Raw);
  CHECK(a.total == doctest::Approx(b.total));
  CHECK(a.total >= 0.0);
  CHECK_THROWS_AS(imag_symbol(fp({1.0, 0.0}), delta, 1.0, ImagVariant::Raw), DomainError);
}

TEST_CASE("normalized symbol agrees with the complex-branch route") {
  double rho = 2.0, delta = 1.0 / 32.0;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(-1.6, 1.6);
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd xi(3);
    xi << unif(rng), unif(rng), unif(rng);
    if (xi.norm() < 0.05) continue;
    FrequencyPoint f(xi);
    auto v = imag_symbol(f, delta, rho, ImagVariant::Normalized);
    double n2 = f.norm_sq();
    Cplx branch1 = (f.xi_prime().squaredNorm() / n2) / (Cplx(n2 / rho - 1.0, -delta));
    Cplx branch2 = (f.xi1() * f.xi1() / n2) / (Cplx(n2 - 1.0, -delta));
    CHECK(v.total == doctest::Approx((branch1 + branch2).imag()).epsilon(1e-12));
  }
}

TEST_CASE("graph geometry") {
  Eigen::VectorXd zero1 = Eigen::VectorXd::Zero(1);
  CHECK(graph_psi(zero1) == doctest::Approx(0.0));
  CHECK(normal_map(zero1).norm() == doctest::Approx(0.0));
  Eigen::VectorXd half(2);
  half << 0.3, 0.4;  // |xi'| = 1/2
  CHECK(graph_psi(half) == doctest::Approx(1.0 - std::sqrt(3.0) / 2.0));
  Eigen::VectorXd big(1);
  big << 1.0;
  CHECK_THROWS_AS(graph_psi(big), DomainError);
  // eta + grad psi(g(eta)) = 0
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-0.35, 0.35);
  for (int t = 0; t < 300; ++t) {
    Eigen::VectorXd eta(2);
    eta << unif(rng), unif(rng);
    Eigen::VectorXd g = normal_map(eta);
    CHECK((eta + graph_psi_grad(g)).norm() < 1e-12);
  }
}

TEST_CASE("graph curvature is one") {
  // det Hess of psi over (1 + |grad psi|^2)^{(n+2)/2} with n = d-1 = 2
  auto psi2 = [](double a, double b) { return 1.0 - std::sqrt(1.0 - a * a - b * b); };
  double h = 1e-5;
  for (double a : {0.0, 0.05, -0.08})
    for (double b : {0.0, 0.06}) {
      double paa = (psi2(a + h, b) - 2 * psi2(a, b) + psi2(a - h, b)) / (h * h);
      double pbb = (psi2(a, b + h) - 2 * psi2(a, b) + psi2(a, b - h)) / (h * h);
      double pab = (psi2(a + h, b + h) - psi2(a + h, b - h) - psi2(a - h, b + h) +
                    psi2(a - h, b - h)) /
                   (4 * h * h);
      Eigen::VectorXd xp(2);
      xp << a, b;
      double g2 = graph_psi_grad(xp).squaredNorm();
      double curv = (paa * pbb - pab * pab) / std::pow(1.0 + g2, 2.0);
      CHECK(curv == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("reduced symbols") {
  double delta = 1.0 / 128.0, rho = 2.0;
  // a_delta(0, xi') = 1/delta for every admissible xi'
  for (double r : {0.0, 0.03, 0.09}) {
    CHECK(reduced_a(0.0, r, delta) == doctest::Approx(1.0 / delta));
  }
  // change-of-variables identity: |xi|^2 - 1 = tau (tau + 2 psi - 2)
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> utau(-0.25, 0.25), ur(0.0, 0.099);
  for (int t = 0; t < 1000; ++t) {
    double tau = utau(rng), r = ur(rng);
    double psi = 1.0 - std::sqrt(1.0 - r * r);
    double xi1 = tau + psi - 1.0;
    double lhs = xi1 * xi1 + r * r - 1.0;
    double rhs = tau * (tau + 2.0 * psi - 2.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  // b_delta stays O(delta) on the slab
  double eps = default_eps_circ(rho);
  double worst = 0.0;
  for (double tau : {-2 * eps, -eps, 0.0, eps / 2, 2 * eps})
    for (double r : {0.0, 0.05, 0.0999})
      worst = std::max(worst, reduced_b(tau, r, delta, rho));
  CHECK(worst < 10.0 * delta);
  Eigen::VectorXd xp(2);
  xp << 0.05, -0.02;
  auto rs = reduced_symbols(0.1, xp, delta, rho);
  CHECK(rs.a == doctest::Approx(reduced_a(0.1, xp.norm(), delta)));
  CHECK(rs.b == doctest::Approx(reduced_b(0.1, xp.norm(), delta, rho)));
}

TEST_CASE("eps_circ default keeps the b-denominator away from zero") {
  for (double rho : {0.25, 0.5, 2.0, 4.0}) {
    double eps = default_eps_circ(rho);
    CHECK(std::abs(1.0 - rho) - 2.0 * eps * (2.0 + 2.0 * eps) >=
          0.5 * std::abs(1.0 - rho) - 1e-12);
  }
  CHECK_THROWS_AS(default_eps_circ(1.0), DomainError);
}

TEST_CASE("carleman symbol") {
  CHECK(std::abs(carleman_symbol(fp({0.0, 0.0, 0.0}))) < 1e-15);
  CHECK_THROWS_AS(carleman_symbol(fp({0.0, 1.0, 0.0})), PoleError);
  Cplx v = carleman_symbol(fp({1.0, 1.0}));
  CHECK(std::abs(v - Cplx(1.0 / 25.0, -7.0 / 25.0)) < 1e-15);
}

TEST_CASE("carleman symbol blow-up rate at the singular sphere") {
  // |symbol((delta,1,0))| * delta^2 -> 1/4 as delta -> 0
  for (int k = 4; k <= 12; ++k) {
    double delta = std::pow(2.0, -k);
    double mag = std::abs(carleman_symbol(fp({delta, 1.0, 0.0})));
    CHECK(mag * delta * delta == doctest::Approx(0.25).epsilon(0.05));
  }
}

TEST_CASE("conjugated matrix and inverse") {
  LameParameters par(1.0, 2.0);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1[0] = 1.0;
  // v = e_1, xi = 0: diag(-1/(lambda+2mu), -1/mu, -1/mu)
  SymbolMatrix m = conjugated_inverse(fp({0.0, 0.0, 0.0}), e1, par);
  CHECK(std::abs(m(0, 0) - Cplx(-0.25, 0.0)) < 1e-14);
  CHECK(std::abs(m(1, 1) - Cplx(-1.0, 0.0)) < 1e-14);
  CHECK(std::abs(m(2, 2) - Cplx(-1.0, 0.0)) < 1e-14);
  // residual oracle over random frequencies
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd xi(3);
    xi << unif(rng), unif(rng), unif(rng);
    FrequencyPoint f(xi);
    Cplx w = conjugated_quadratic(f, e1);
    if (std::abs(w) < 1e-3) continue;
    SymbolMatrix prod = conjugated_matrix(f, e1, par) * conjugated_inverse(f, e1, par);
    CHECK(inf_norm(prod - SymbolMatrix::Identity(3, 3)) < 1e-12);
  }
  // scalar reduction when lambda + mu = 0
  LameParameters scalar(1.0, -1.0);
  Eigen::VectorXd e1b = Eigen::VectorXd::Zero(2);
  e1b[0] = 1.0;
  FrequencyPoint f2 = fp({0.7, -0.4});
  SymbolMatrix sc = conjugated_inverse(f2, e1b, scalar);
  Cplx want = 1.0 / conjugated_quadratic(f2, e1b);
  CHECK(std::abs(sc(0, 0) - want) < 1e-14);
  CHECK(std::abs(sc(0, 1)) < 1e-15);
  // non-unit v rejected
  CHECK_THROWS_AS(conjugated_inverse(f2, Eigen::VectorXd::Ones(2), par), DomainError);
}
