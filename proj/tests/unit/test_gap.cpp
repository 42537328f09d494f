#include <cmath>
#include <numbers>

#include "bcsgl/error.hpp"
#include "bcsgl/gap.hpp"
#include "doctest.h"

using namespace bcsgl;
using std::numbers::pi;

namespace {

const GapSolution& reference_solution() {
  static const GapSolution sol = critical_temperature(*gaussian_potential(2.0, 1.0), 1.0, {0.05, 0.2});
  return sol;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("kt inverse kernel") {
  CHECK(rel(swave_kt_inverse_kernel(1.0, 2.0, 0.7, 1.0), swave_kt_inverse_kernel(2.0, 1.0, 0.7, 1.0)) <= 1e-12);
  // independent adaptive quadrature oracle at mu = 0, T = 1
  CHECK(rel(swave_kt_inverse_kernel(1.0, 1.0, 1.0, 0.0), 0.43407294225597322) <= 1e-10);
  CHECK_THROWS_AS(swave_kt_inverse_kernel(1.0, 1.0, 0.0, 0.0), Error);
}

TEST_CASE("kt inverse kernel at large T acts as 1/(2T)") {
  const double T = 1e3, r = 1.0;
  std::vector<double> e;
  for (int i = 0; i < 7; ++i) e.push_back(0.1 * i);
  for (int i = 0; i < 60; ++i) e.push_back(0.7 + 0.01 * i);
  for (int i = 0; i <= 47; ++i) e.push_back(1.3 + 0.1 * i);
  const RadialGrid g(e, 8);
  KahanSum<double> s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rp = g.nodes()[i];
    s += g.weights()[i] * rp * rp * std::exp(-rp * rp) * swave_kt_inverse_kernel(r, rp, T, 1.0, 1e-9);
  }
  CHECK(rel(s.value(), std::exp(-r * r) / (2.0 * T)) <= 1e-2);
}

TEST_CASE("birman-schwinger operator") {
  const auto V = gaussian_potential(2.0, 1.0);
  const GridConfig cfg;
  const auto rg = make_radial_grid(*V, cfg);
  const auto pg = make_momentum_grid(*V, 1.0, 0.05, cfg);
  const auto Vs = sample(*V, rg);

  SUBCASE("reference eta") {
    const auto pg01 = make_momentum_grid(*V, 1.0, 0.01, cfg);
    CHECK(rel(bs_top_eigenpair(0.01, Vs, 1.0, pg01).eta, 1.853145167582492) <= 1e-6);
  }
  SUBCASE("symmetric and positive semidefinite") {
    const BirmanSchwingerOperator op(Vs, pg, 1.0);
    const Eigen::MatrixXd A = op.matrix(0.1);
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * A.cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
  SUBCASE("eta decreases in T") {
    const BirmanSchwingerOperator op(Vs, pg, 1.0);
    double prev = INFINITY;
    for (int i = 0; i <= 12; ++i) {
      const double T = 0.05 * std::pow(10.0, i / 6.0);
      const double eta = op.top(T).first;
      CHECK(eta < prev);
      prev = eta;
    }
  }
  SUBCASE("monotone in V") {
    const auto V2 = sample(*gaussian_potential(4.0, 1.0), rg);
    CHECK(bs_top_eigenpair(0.1, V2, 1.0, pg).eta >= bs_top_eigenpair(0.1, Vs, 1.0, pg).eta);
    const auto V0 = sample(*gaussian_potential(0.0, 1.0), rg);
    CHECK(bs_top_eigenpair(0.1, V0, 1.0, pg).eta == 0.0);
  }
  SUBCASE("phase convention") {
    const auto top = bs_top_eigenpair(0.1, Vs, 1.0, pg);
    const BirmanSchwingerOperator op(Vs, pg, 1.0);
    CHECK(op.weight_root().dot(top.phi) >= 0.0);
    CHECK(top.phi.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("reference critical temperature") {
  const auto& s = reference_solution();
  CHECK(rel(s.Tc, 0.112630618627166) <= 1e-6);
  CHECK(s.eta_residual <= 1e-10);
  CHECK(s.gap_residual <= 1e-8);
  CHECK(std::abs(weighted_norm(s.alpha_star, 0, NormKind::L2) - 1.0) <= 1e-10);
  CHECK(s.kappa > 0.0);
  CHECK_FALSE(s.degenerate);
  CHECK(std::abs(s.e0) <= 1e-8);
}

TEST_CASE("bracket errors") {
  const auto V = gaussian_potential(2.0, 1.0);
  try {
    critical_temperature(*V, 1.0, {0.2, 0.5});
    FAIL("expected NoRoot");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoRoot);
  }
  CHECK_THROWS_AS(critical_temperature(*V, 1.0, {0.3, 0.1}), Error);
}

TEST_CASE("halving V lowers Tc") {
  // eta decreases in T, so eta_{V/2}(Tc) < 1 places the root of V/2 below Tc
  const auto& s = reference_solution();
  const auto half = gaussian_potential(1.0, 1.0);
  const auto rg = make_radial_grid(*half, {});
  const auto pg = make_momentum_grid(*half, 1.0, s.Tc, {});
  CHECK(bs_top_eigenpair(s.Tc, sample(*half, rg), 1.0, pg).eta < 1.0);
  CHECK(bs_top_eigenpair(0.5 * s.Tc, sample(*half, rg), 1.0, pg).eta < 1.0);
}

TEST_CASE("gap residual sensitivity") {
  const auto V = gaussian_potential(2.0, 1.0);
  GapSolution s = reference_solution();
  CHECK(gap_residual(s, *V, 1.0) <= 1e-8);
  // direction orthogonal to alpha* in L2(R^3)
  auto& a = s.alpha_star;
  std::vector<double> b(a.size());
  KahanSum<double> ab, bb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a.grid.nodes()[i];
    b[i] = std::exp(-0.5 * r * r) * (1.0 - r * r);
    const double w = 4.0 * pi * a.grid.weights()[i] * r * r;
    ab += w * a.values[i] * b[i];
  }
  for (std::size_t i = 0; i < a.size(); ++i) b[i] -= ab.value() * a.values[i];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a.grid.nodes()[i];
    bb += 4.0 * pi * a.grid.weights()[i] * r * r * b[i] * b[i];
  }
  for (std::size_t i = 0; i < a.size(); ++i) a.values[i] += 0.01 * b[i] / std::sqrt(bb.value());
  CHECK(gap_residual(s, *V, 1.0) > 1e-3);

  try {
    gap_residual(reference_solution(), *gaussian_potential(0.0, 1.0), 1.0);
    FAIL("expected DivisionGuard");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionGuard);
  }
}

TEST_CASE("spectral gap") {
  const auto& s = reference_solution();
  const auto g = spectral_gap(*gaussian_potential(2.0, 1.0), 1.0, s.Tc);
  CHECK(std::abs(g.e0) <= 1e-8);
  CHECK(g.kappa > 0.0);
  CHECK(g.bound_state);
  const auto free = spectral_gap(*gaussian_potential(0.0, 1.0), 1.0, s.Tc);
  CHECK_FALSE(free.bound_state);
  CHECK(free.e0 >= 2.0 * s.Tc - 1e-12);
}

TEST_CASE("decay moments") {
  const auto m = moment_check(reference_solution().alpha_star, 3);
  REQUIRE(m.size() == 4);
  CHECK(m[0].value >= 1.0);
  const double frozen[] = {2.129, 23.42, 1918.2, 459145.6};
  for (int nu = 0; nu < 4; ++nu) {
    CHECK(m[nu].value == doctest::Approx(frozen[nu]).epsilon(1e-4));
    CHECK(m[nu].tail_share <= 1e-10);
    if (nu > 0) CHECK(m[nu].value > m[nu - 1].value);
  }
}
