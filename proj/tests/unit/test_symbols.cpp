#include <cmath>
#include <numbers>

#include "bcsgl/error.hpp"
#include "bcsgl/symbols.hpp"
#include "doctest.h"

using namespace bcsgl;
using namespace bcsgl::symbols;
using std::numbers::pi;

TEST_CASE("matsubara frequencies") {
  CHECK(matsubara_frequency(0, 1.0) == doctest::Approx(pi));
  CHECK(matsubara_frequency(-1, 1.0) == doctest::Approx(-pi));
  for (std::int64_t n = -5; n < 5; ++n) CHECK(matsubara_frequency(-n - 1, 0.7) == -matsubara_frequency(n, 0.7));
}

TEST_CASE("cosh^-2 matsubara identity") {
  const double betas[] = {0.5, 1.0, 2.0, 5.0, 20.0};
  const double zs[] = {-3.0, -0.2, 0.4, 2.5};
  for (double beta : betas)
    for (double z : zs) {
      const double exact = -0.5 * beta * sech2(0.5 * beta * z);
      const auto raw = cosh2_matsubara_sum(beta, z, {20000});
      CHECK(std::abs(raw.value - exact) <= raw.tail_bound);
      const auto acc = cosh2_matsubara_sum_accelerated(beta, z, {2000});
      CHECK(std::abs(acc.value - exact) <= acc.tail_bound + 1e-13 * beta);
      CHECK(acc.tail_bound < raw.tail_bound);
    }
  CHECK_THROWS_AS(cosh2_matsubara_sum(1.0, 0.0, {0}), Error);
}

TEST_CASE("g1 matsubara identity") {
  const double pairs[][2] = {{1.0, 1.0}, {1.0, 1e-5}, {2.0, 0.3}, {0.5, 4.0}, {10.0, 0.05},
                             {3.0, -2.0}, {1.0, 1e-2}, {7.0, 1.5}, {0.2, 0.2}, {4.0, 1e-4}};
  for (const auto& pe : pairs) {
    const double beta = pe[0], E = pe[1];
    const auto s = quartic_matsubara_sum(beta, E, {100000});
    const double closed = 0.5 * beta * beta * beta * g1_over_z(beta * E);
    CHECK(std::abs(s.value - closed) <= s.tail_bound + 1e-13 * std::abs(closed));
  }
}

TEST_CASE("K_T symbol") {
  CHECK(kt_symbol(0.0, 0.3) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(kt_symbol(-1.7, 0.3) == kt_symbol(1.7, 0.3));
  CHECK(std::abs(kt_symbol(50.0, 1.0) - 50.0) < 1e-10 * 50.0);
  for (double x = -20.0; x <= 20.0; x += 0.37) {
    CHECK(kt_symbol(x, 0.8) >= std::max(1.6, std::abs(x)) * (1.0 - 1e-15));
    CHECK(kt_symbol(x, 0.8) * kt_inverse(x, 0.8) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // d/dT of 1/K_T by central differences
  const double h = 1e-5;
  const double fd = (kt_inverse(0.7, 0.4 + h) - kt_inverse(0.7, 0.4 - h)) / (2.0 * h);
  CHECK(kt_inverse_dT(0.7, 0.4) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("L_T symbol") {
  const double T = 0.25, mu = 1.0;
  for (double p = 0.05; p < 3.0; p += 0.137) {
    if (std::abs(p * p - mu) < 1e-3) continue;
    CHECK(std::abs(lt_symbol(p, p, T, mu) * kt_symbol(p * p - mu, T) - 1.0) < 1e-12);
    CHECK(lt_symbol(p, 1.9 - p, T, mu) == lt_symbol(1.9 - p, p, T, mu));
  }
  // a = -b: limit (beta/2) sech^2(beta a / 2), against a small offset
  const double a = 0.3, beta = 1.0 / T;
  const double limit = 0.5 * beta * sech2(0.5 * beta * a);
  CHECK(lt_symbol_energies(a, -a, T) == doctest::Approx(limit).epsilon(1e-14));
  const double off = 1e-6;
  const double near = (std::tanh(0.5 * beta * a) + std::tanh(0.5 * beta * (-a + off))) / off;
  CHECK(std::abs(lt_symbol_energies(a, -a + off, T) - near) < 1e-8);
  // continuity across the series switch
  CHECK(std::abs(lt_symbol_energies(a, -a + 1.29e-8, T) - lt_symbol_energies(a, -a + 1.31e-8, T)) < 1e-9);
}

TEST_CASE("g1 and g2") {
  CHECK(g1(0.0) == 0.0);
  CHECK(g2(0.0) == 0.25);
  // continuity across the series switch
  CHECK(g1(0.999e-3) == doctest::Approx(g1(1.001e-3)).epsilon(1e-5));
  CHECK(g2(0.999e-3) == doctest::Approx(g2(1.001e-3)).epsilon(1e-5));
  CHECK(g1_over_z(0.0) == doctest::Approx(1.0 / 12.0));
  CHECK(g1(-2.0) == -g1(2.0));
  CHECK(g2(-2.0) == g2(2.0));

  // Hessian of q -> L_T(p + q/2, p - q/2) at q = 0, parallel and perpendicular
  // to p, equals -(beta^2/2)[g1 + 2 beta p^2 g2] and -(beta^2/2) g1
  const double beta = 2.0, T = 0.5, mu = 1.0;
  for (double p : {0.4, 0.9, 1.3, 2.1}) {
    const double h = 1e-3;
    auto par = [&](double q) { return lt_symbol(p + q / 2.0, p - q / 2.0, T, mu); };
    auto perp = [&](double q) {
      const double pq = std::sqrt(p * p + q * q / 4.0);
      return lt_symbol(pq, pq, T, mu);
    };
    const double hpar = -(par(h) - 2.0 * par(0.0) + par(-h)) / (h * h);
    const double hperp = -(perp(h) - 2.0 * perp(0.0) + perp(-h)) / (h * h);
    const double z = beta * (p * p - mu);
    CHECK(std::abs(2.0 * hperp / (beta * beta) - g1(z)) < 1e-6);
    CHECK(std::abs((hpar - hperp) / (beta * beta * beta * p * p) - g2(z)) < 1e-6);
  }
}

TEST_CASE("free resolvent kernel") {
  const double mu = 0.5;
  const cplx z{-mu - 1.0, 0.0};
  CHECK(std::abs(g0_kernel(1.0, z, mu) - cplx{-std::exp(-1.0) / (4.0 * pi), 0.0}) < 1e-16);
  CHECK(g0_kernel(-0.7, z, mu) == g0_kernel(0.7, z, mu));
  CHECK_THROWS_AS(g0_kernel(0.0, z, mu), Error);
  try {
    g0_kernel(1.0, cplx{0.0, 0.0}, mu);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BranchCut);
  }
  CHECK(g0_weighted_l1(0.0, z, mu) == doctest::Approx(1.0));
  CHECK(g0_weighted_l1(2.0, z, mu) == doctest::Approx(6.0));
  CHECK(g0_weighted_l1(1.0, cplx{-mu - 4.0, 0.0}, mu) == doctest::Approx(0.25));
  CHECK_THROWS_AS(g0_weighted_l1(-2.0, z, mu), Error);
  try {
    g0_weighted_l1(1.0, cplx{3.0, 0.0}, mu);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Divergence);
  }
}

TEST_CASE("weighted L1 closed form against quadrature on contour points") {
  const auto path = speaker_path(10.0, 1.0, 1.0);
  const cplx pts[] = {path.segments[0].at(3.0), path.segments[1].at(0.5), path.segments[2].at(0.2),
                      path.segments[3].at(0.7), path.segments[4].at(8.0)};
  for (double a : {0.0, 1.0, 2.0, 3.0, -1.5, 0.5})
    for (const cplx& z : pts) {
      const double c = g0_weighted_l1(a, z, 1.0);
      const double q = g0_weighted_l1_quadrature(a, z, 1.0);
      CHECK(std::abs(c - q) <= 1e-6 * c);
    }
}

TEST_CASE("decay function") {
  CHECK(f_decay(0.0, 1.0, 1.0) == 2.0);
  CHECK(f_decay(-2.0, 1.0, 1.0) == 0.5);
  CHECK(f_decay(-1.0, 2.0, 1.0) == 0.5);
  CHECK_THROWS_AS(f_decay(0.0, 0.0, 1.0), Error);
  // ||x|^a g0^{i w + t}||_1 <= C_a f(t, w)^{1 + a/2}
  for (double a : {0.0, 1.0, 2.0}) {
    double worst = 0.0;
    for (double t = -5.0; t <= 5.0; t += 0.5)
      for (double w = 0.1; w <= 20.0; w *= 2.0) {
        const double r = g0_weighted_l1(a, cplx{t, w}, 0.0) / std::pow(f_decay(t, w, 0.0), 1.0 + a / 2.0);
        worst = std::max(worst, r);
      }
    CHECK(worst <= std::tgamma(a + 2.0) * std::pow(4.0, 1.0 + a / 2.0));
  }
}

TEST_CASE("speaker path") {
  const double beta = 2.0, mu = 0.5, R = 10.0;
  const auto p = speaker_path(R, beta, mu);
  CHECK(p.segments[2].at(0.0) == cplx{-(mu + 1.0), 0.0});
  CHECK(p.segments[0].at(0.0) == cplx{0.0, pi / (2.0 * beta)});
  CHECK(std::abs(p.segments[1].at(1.0) - p.segments[2].at(-1.0)) < 1e-15);
  CHECK(std::abs(p.segments[1].at(1.0) - cplx{-(mu + 1.0), pi / (2.0 * beta)}) < 1e-15);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(p.segments[k].exit() - p.segments[k + 1].entry()) < 1e-15);
  CHECK(p.segments[0].entry().imag() == doctest::Approx(pi / (2.0 * beta) + R));
  CHECK(p.segments[4].exit().imag() == doctest::Approx(-pi / (2.0 * beta) - R));
  CHECK(speaker_path(1.0, 1.0, 3.0).mu_eff == 1.0);
}

TEST_CASE("contour representation of K_T") {
  CHECK(std::abs(kt_contour_eval(0.0, 1.0, 1.0, 50.0) - 2.0) < 1e-6);
  CHECK(std::abs(kt_contour_eval(5.0, 1.0, 1.0, 50.0) - 5.0 / std::tanh(2.5)) < 1e-6);
  CHECK(std::abs(kt_contour_eval(-0.8, 0.5, 1.0, 50.0) - kt_symbol(-0.8, 0.5)) < 1e-6);
  const double d = std::abs(kt_contour_eval(1.0, 1.0, 1.0, 40.0) - kt_contour_eval(1.0, 1.0, 1.0, 20.0));
  CHECK(d <= kt_contour_tail_estimate(1.0, 1.0, 20.0));
  CHECK_THROWS_AS(kt_contour_eval(-5.0, 1.0, 3.0, 20.0), Error);
}
