#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bcsgl/model.hpp"

namespace bcsgl {

/// Nonnegative radial pair potential V(r).
class Potential {
 public:
  virtual ~Potential() = default;

  virtual double operator()(double r) const = 0;
  /// Short identifier with parameters, e.g. "gaussian(v0=2,a=1)".
  virtual std::string describe() const = 0;
  /// Radius beyond which sqrt(V) is negligible (below 1e-17 of its scale).
  virtual double support_radius() const = 0;
  /// Typical length scale; sets the r-panel width.
  virtual double length_scale() const = 0;
  /// Points where V is not smooth; they become panel edges.
  virtual std::vector<double> breakpoints() const { return {}; }
  /// Momentum beyond which the transform of V times a smooth profile is
  /// negligible.
  virtual double momentum_cutoff() const = 0;
};

/// v0 exp(-(r/a)^2)
std::shared_ptr<const Potential> gaussian_potential(double v0, double a);
/// v0 exp(-r/a) / max(r, rc)
std::shared_ptr<const Potential> yukawa_cut_potential(double v0, double a, double rc);
/// Natural cubic spline through tabulated samples, zero beyond the last node.
std::shared_ptr<const Potential> tabulated_potential(std::vector<double> r, std::vector<double> v,
                                                     std::string source);

/// Parses "gaussian:V0,A", "yukawa-cut:V0,A,RC" or "file:PATH".
std::shared_ptr<const Potential> parse_potential(const std::string& spec);

/// Samples V on a grid.
RadialFunction sample(const Potential& V, const RadialGrid& grid);

}  // namespace bcsgl
