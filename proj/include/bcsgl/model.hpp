#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bcsgl/quadrature.hpp"

namespace bcsgl {

/// Physical context: chemical potential, temperature (k_B = 1) and field
/// strength.
class PhysParams {
 public:
  PhysParams(double mu, double T, double B = 0.0);

  double mu() const { return mu_; }
  double T() const { return T_; }
  double B() const { return B_; }
  double beta() const { return beta_; }

 private:
  double mu_;
  double T_;
  double B_;
  double beta_;
};

/// Real radial profile f(|x|) sampled on a composite Gauss-Legendre grid in r.
struct RadialFunction {
  RadialGrid grid;
  std::vector<double> values;

  RadialFunction() = default;
  RadialFunction(RadialGrid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
};

/// Radial profile in momentum space. Radial real functions have real Fourier
/// transforms, so the values are real.
struct RadialMomentumFunction {
  RadialGrid grid;
  std::vector<double> values;

  RadialMomentumFunction() = default;
  RadialMomentumFunction(RadialGrid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
};

/// j0(x) = sin(x)/x with the series near zero.
double spherical_j0(double x);
/// j1(x) = sin(x)/x^2 - cos(x)/x with the series near zero.
double spherical_j1(double x);

struct FourierOptions {
  // Allowed share of the integral carried by the last panel.
  double tail_tolerance = 1e-12;
};

/// f^(p) = (4 pi / p) int_0^inf r sin(p r) f(r) dr, and 4 pi int r^2 f dr at
/// p = 0. Throws InvalidGrid for non-ascending p-nodes and Truncation when the
/// last r-panel carries more than the tolerated share of int r^2 |f| dr.
RadialMomentumFunction radial_fourier(const RadialFunction& f, const RadialGrid& pgrid,
                                      const FourierOptions& opts = {});

/// Inverse transform f(r) = (2 pi^2)^-1 int_0^inf p^2 j0(p r) f^(p) dp on the
/// nodes of `rgrid`.
RadialFunction radial_fourier_inverse(const RadialMomentumFunction& fhat, const RadialGrid& rgrid);

/// Inverse transform evaluated at a single radius.
double radial_fourier_inverse_at(const RadialMomentumFunction& fhat, double r);

enum class NormKind { L1, L2 };

/// int |x|^a |f| dx (L1) or (int |x|^{2a} |f|^2 dx)^{1/2} (L2) over R^3.
double weighted_norm(const RadialFunction& f, int a, NormKind kind);

/// Panel-wise polynomial (spectral) derivative of f on its own grid.
std::vector<double> spectral_derivative(const RadialFunction& f);

/// Pointwise value of the panel interpolant of f at r (zero beyond the grid).
double interpolate(const RadialFunction& f, double r);

/// int_0^R r^2 dr over the grid, used to validate quadrature weights.
double radial_volume_moment(const RadialGrid& grid);

// ---- two-column text format -------------------------------------------------
// Lines starting with '#' carry `key = value` metadata. The grid is stored as
// `grid.order` and `grid.edges` so a reader can rebuild the weights.

using Metadata = std::map<std::string, std::string>;

void write_two_column(std::ostream& os, const RadialGrid& grid, std::span<const double> values,
                      const Metadata& meta = {});

struct TwoColumnData {
  Metadata meta;
  std::vector<double> nodes;
  std::vector<double> values;
};

TwoColumnData read_two_column(std::istream& is);

/// Rebuilds a RadialFunction from a file written by write_two_column.
RadialFunction radial_function_from(const TwoColumnData& data);

}  // namespace bcsgl
