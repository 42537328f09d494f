#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace bcsgl {

/// Compensated (Neumaier) summation. All reductions in the library go
/// through this accumulator in a fixed left-to-right order so that results do
/// not depend on how the work was scheduled.
template <typename T>
class KahanSum {
 public:
  KahanSum& operator+=(T x) {
    const T t = sum_ + x;
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
      else
        comp_ += (x - t) + sum_;
    } else {
      // complex: compensate real and imaginary parts independently
      comp_ += compensation(sum_.real(), x.real(), t.real()) +
               T(0, 1) * compensation(sum_.imag(), x.imag(), t.imag());
    }
    sum_ = t;
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double compensation(double s, double x, double t) {
    return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
  }
  T sum_{};
  T comp_{};
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the n-point rule; computed once per n and cached.
const GaussLegendreRule& gauss_legendre(int n);

/// Composite Gauss-Legendre grid on a sequence of panel edges. Nodes are
/// strictly ascending and the panel structure is kept so the grid can be
/// serialized, refined and differentiated panel-wise.
class RadialGrid {
 public:
  RadialGrid() = default;
  RadialGrid(std::vector<double> edges, int order);

  /// Equal panels of width `panel_width` on [a, b]; the last panel absorbs the
  /// remainder so b is always an edge.
  static RadialGrid uniform(double a, double b, double panel_width, int order);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> edges() const { return edges_; }
  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t panel_count() const { return edges_.empty() ? 0 : edges_.size() - 1; }
  double upper() const { return edges_.empty() ? 0.0 : edges_.back(); }

  /// Same panels split in `factor` equal parts each.
  RadialGrid refined(int factor) const;

 private:
  std::vector<double> edges_;
  int order_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Merge breakpoints into a sorted edge list, dropping panels narrower than
/// `min_width`.
std::vector<double> merge_edges(std::vector<double> edges, double min_width);

/// Checks that a node sequence is strictly ascending and finite; throws
/// InvalidGrid otherwise.
void require_ascending(std::span<const double> nodes, const char* what);

}  // namespace bcsgl
