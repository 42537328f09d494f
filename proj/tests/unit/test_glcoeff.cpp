#include <cmath>

#include "bcsgl/error.hpp"
#include "bcsgl/glcoeff.hpp"
#include "doctest.h"

using namespace bcsgl;

namespace {

const GapSolution& reference_solution() {
  static const GapSolution sol = critical_temperature(*gaussian_potential(2.0, 1.0), 1.0, {0.05, 0.2});
  return sol;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("reference coefficients") {
  const auto& s = reference_solution();
  const auto c = compute_coefficients(s);
  CHECK(rel(c.Lambda0, 0.85729378261545) <= 1e-6);
  CHECK(rel(c.Lambda2, 0.147909259183489) <= 1e-6);
  CHECK(rel(c.Lambda3, 7.07966417435413) <= 1e-6);
  CHECK(rel(c.Dc, 11.5921584267004) <= 1e-6);
  CHECK(c.Dc == 2.0 * c.Lambda0 / c.Lambda2);
  CHECK(std::abs(c.Dc * c.Lambda2 - 2.0 * c.Lambda0) <= 4e-16 * c.Lambda0);

  CHECK(c.provenance.lambda2_fd <= 1e-5);
  CHECK(c.provenance.lambda0_hessian <= 1e-4);
  CHECK(c.provenance.lambda0_cross <= 1e-8);
  CHECK(c.provenance.lambda3_matsubara <= 1e-8);
  CHECK(c.provenance.matsubara_min >= 1000);
}

TEST_CASE("independent routes") {
  const auto& s = reference_solution();
  const double mu = 1.0;
  CHECK(rel(lambda2_finite_difference(s, mu), lambda2(s, mu)) <= 1e-5);
  CHECK(rel(lambda0_hessian(s, mu), lambda0(s, mu)) <= 1e-4);
  CHECK(rel(lambda0_tanh_form(s, mu), lambda0(s, mu)) <= 1e-8);
  CHECK(rel(lambda3_matsubara(s, mu).value, lambda3(s, mu)) <= 1e-8);
}

TEST_CASE("vanishing pair amplitude") {
  GapSolution s = reference_solution();
  for (auto& v : s.v_alpha_hat.values) v = 0.0;
  CHECK(lambda0(s, 1.0) == 0.0);
  CHECK(lambda2(s, 1.0) == 0.0);
  CHECK(lambda3(s, 1.0) == 0.0);
  try {
    compute_coefficients(s, {false});
    FAIL("expected DivisionGuard");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionGuard);
  }
}

TEST_CASE("critical ratio") {
  CHECK(critical_ratio_Dc(0.3, 0.3) == 2.0);
  CHECK(critical_ratio_Dc(1.0, 4.0) == 0.5);
  CHECK_THROWS_AS(critical_ratio_Dc(1.0, 0.0), Error);
}

TEST_CASE("tc shift") {
  CHECK(tc_shift(0.3, 5.0, 0.0).T == 0.3);
  CHECK(tc_shift(1.0, 2.0, 0.01).T == doctest::Approx(0.98).epsilon(1e-15));
  const double slope1 = (1.0 - tc_shift(1.0, 3.0, 0.01).T) / 0.01;
  const double slope2 = (1.0 - tc_shift(1.0, 3.0, 0.07).T) / 0.07;
  CHECK(slope1 == doctest::Approx(slope2).epsilon(1e-12));
  CHECK_FALSE(tc_shift(1.0, 2.0, 0.6).valid);
  CHECK_THROWS_AS(tc_shift(1.0, 2.0, -0.1), Error);
}
