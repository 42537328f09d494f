#include <cmath>
#include <numbers>
#include <sstream>

#include "bcsgl/error.hpp"
#include "bcsgl/model.hpp"
#include "bcsgl/potential.hpp"
#include "doctest.h"

using namespace bcsgl;
using std::numbers::pi;

namespace {

RadialFunction gaussian_profile(const RadialGrid& g) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(-g.nodes()[i] * g.nodes()[i]);
  return {g, v};
}

}  // namespace

TEST_CASE("physical parameters") {
  const PhysParams pp(1.0, 0.3, 0.0);
  CHECK(pp.beta() * pp.T() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(PhysParams(1.0, 0.0), Error);
  CHECK_THROWS_AS(PhysParams(1.0, 1.0, -1.0), Error);
}

TEST_CASE("gauss-legendre grid integrates r^2") {
  const auto g = RadialGrid::uniform(0.0, 7.3, 0.5, 16);
  CHECK(std::abs(radial_volume_moment(g) - 7.3 * 7.3 * 7.3 / 3.0) < 1e-10 * 7.3 * 7.3 * 7.3 / 3.0);
  for (double w : g.weights()) CHECK(w >= 0.0);
  CHECK_THROWS_AS(RadialGrid({0.0, 2.0, 1.0}, 8), Error);
}

TEST_CASE("fourier transform of a gaussian") {
  const auto g = RadialGrid::uniform(0.0, 8.0, 0.5, 20);
  const auto f = gaussian_profile(g);
  const auto pg = RadialGrid::uniform(0.0, 12.0, 0.5, 20);
  const auto fh = radial_fourier(f, pg);
  double err = 0.0;
  for (std::size_t k = 0; k < pg.size(); ++k) {
    const double p = pg.nodes()[k];
    err = std::max(err, std::abs(fh.values[k] - std::pow(pi, 1.5) * std::exp(-p * p / 4.0)));
  }
  CHECK(err < 1e-12);

  SUBCASE("zero maps to zero") {
    const RadialFunction z(g, std::vector<double>(g.size(), 0.0));
    for (double v : radial_fourier(z, pg).values) CHECK(v == 0.0);
  }
  SUBCASE("plancherel") {
    const auto bigp = RadialGrid::uniform(0.0, 20.0, 0.5, 20);
    const auto fb = radial_fourier(f, bigp);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < bigp.size(); ++k)
      lhs += bigp.weights()[k] * bigp.nodes()[k] * bigp.nodes()[k] * fb.values[k] * fb.values[k];
    lhs *= 4.0 * pi / std::pow(2.0 * pi, 3);
    for (std::size_t i = 0; i < g.size(); ++i)
      rhs += g.weights()[i] * g.nodes()[i] * g.nodes()[i] * f.values[i] * f.values[i];
    rhs *= 4.0 * pi;
    CHECK(std::abs(lhs - rhs) < 1e-12 * rhs);
  }
  SUBCASE("linearity") {
    std::vector<double> h(g.size()), s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      h[i] = g.nodes()[i] * g.nodes()[i] * std::exp(-2.0 * g.nodes()[i] * g.nodes()[i]);
      s[i] = f.values[i] + h[i];
    }
    const auto fs = radial_fourier({g, s}, pg);
    const auto fhh = radial_fourier({g, h}, pg);
    for (std::size_t k = 0; k < pg.size(); ++k) CHECK(std::abs(fs.values[k] - fh.values[k] - fhh.values[k]) < 1e-12);
  }
  SUBCASE("refinement stability") {
    const auto g2 = g.refined(2);
    const auto fh2 = radial_fourier(gaussian_profile(g2), pg);
    double d = 0.0;
    for (std::size_t k = 0; k < pg.size(); ++k) d = std::max(d, std::abs(fh2.values[k] - fh.values[k]));
    CHECK(d < 1e-8);
  }
  SUBCASE("inverse transform") {
    const auto back = radial_fourier_inverse(fh, g);
    double d = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) d = std::max(d, std::abs(back.values[i] - f.values[i]));
    CHECK(d < 1e-10);
  }
}

TEST_CASE("fourier transform errors") {
  const auto g = RadialGrid::uniform(0.0, 2.0, 0.5, 10);
  const auto f = gaussian_profile(g);
  CHECK_THROWS_AS(radial_fourier(f, RadialGrid::uniform(0.0, 1.0, 0.5, 4)), Error);
  try {
    radial_fourier(f, RadialGrid::uniform(0.0, 1.0, 0.5, 4));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Truncation);
  }
}

TEST_CASE("weighted norms") {
  const auto g = RadialGrid::uniform(0.0, 60.0, 1.0, 20);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(-g.nodes()[i]);
  const RadialFunction f(g, v);
  CHECK(weighted_norm(f, 0, NormKind::L1) == doctest::Approx(8.0 * pi).epsilon(1e-12));
  CHECK(weighted_norm(f, 2, NormKind::L1) == doctest::Approx(96.0 * pi).epsilon(1e-12));
  // int e^{-2r} 4 pi r^2 dr = pi
  CHECK(weighted_norm(f, 0, NormKind::L2) == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  const RadialFunction z(g, std::vector<double>(g.size(), 0.0));
  CHECK(weighted_norm(z, 1, NormKind::L1) == 0.0);
  CHECK_THROWS_AS(weighted_norm(f, -1, NormKind::L1), Error);
}

TEST_CASE("two-column round trip") {
  const auto g = RadialGrid::uniform(0.0, 3.0, 1.0, 6);
  const auto f = gaussian_profile(g);
  std::stringstream ss;
  write_two_column(ss, g, f.values, {{"kind", "test"}});
  const auto data = read_two_column(ss);
  CHECK(data.meta.at("kind") == "test");
  const auto back = radial_function_from(data);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(back.values[i] == f.values[i]);
    CHECK(back.grid.weights()[i] == g.weights()[i]);
  }
}

TEST_CASE("spectral derivative and interpolation") {
  const auto g = RadialGrid::uniform(0.0, 6.0, 0.5, 16);
  const auto f = gaussian_profile(g);
  const auto d = spectral_derivative(f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes()[i];
    CHECK(std::abs(d[i] + 2.0 * r * std::exp(-r * r)) < 1e-9);
  }
  CHECK(interpolate(f, 1.2345) == doctest::Approx(std::exp(-1.2345 * 1.2345)).epsilon(1e-12));
}

TEST_CASE("potential parsing") {
  const auto v = parse_potential("gaussian:2,1");
  CHECK((*v)(0.0) == 2.0);
  CHECK((*v)(1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  const auto y = parse_potential("yukawa-cut:1,2,0.5");
  CHECK((*y)(0.1) == doctest::Approx(2.0 * std::exp(-0.05)));
  CHECK_THROWS_AS(parse_potential("gaussian:2"), Error);
  CHECK_THROWS_AS(parse_potential("gaussian:-1,1"), Error);
  CHECK_THROWS_AS(parse_potential("square:1"), Error);
  CHECK_THROWS_AS(parse_potential("file:/nonexistent/v.txt"), Error);
}
