#include "bcsgl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "bcsgl/error.hpp"

namespace bcsgl {

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; symmetric
  // pairs are filled together.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // one more derivative evaluation at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1 || n > 200) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

void require_ascending(std::span<const double> nodes, const char* what) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]))
      throw Error(ErrorKind::InvalidGrid, std::string(what) + ": non-finite node");
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw Error(ErrorKind::InvalidGrid,
                  std::string(what) + ": nodes not strictly ascending at index " + std::to_string(i));
  }
}

RadialGrid::RadialGrid(std::vector<double> edges, int order) : edges_(std::move(edges)), order_(order) {
  if (edges_.size() < 2) throw Error(ErrorKind::InvalidGrid, "a grid needs at least one panel");
  require_ascending(edges_, "panel edges");
  if (edges_.front() < 0.0) throw Error(ErrorKind::InvalidGrid, "radial grids start at r >= 0");
  const auto& rule = gauss_legendre(order);
  nodes_.reserve(panel_count() * order);
  weights_.reserve(panel_count() * order);
  for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
    const double half = 0.5 * (edges_[k + 1] - edges_[k]);
    const double mid = 0.5 * (edges_[k + 1] + edges_[k]);
    for (int i = 0; i < order; ++i) {
      nodes_.push_back(mid + half * rule.nodes[i]);
      weights_.push_back(half * rule.weights[i]);
    }
  }
}

RadialGrid RadialGrid::uniform(double a, double b, double panel_width, int order) {
  if (!(b > a) || !(panel_width > 0.0)) throw Error(ErrorKind::InvalidGrid, "empty uniform grid");
  const auto n = static_cast<std::size_t>(std::max(1.0, std::round((b - a) / panel_width)));
  std::vector<double> edges(n + 1);
  for (std::size_t k = 0; k <= n; ++k) edges[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
  edges.back() = b;
  return RadialGrid(std::move(edges), order);
}

RadialGrid RadialGrid::refined(int factor) const {
  if (factor < 1) throw Error(ErrorKind::InvalidArgument, "refinement factor must be >= 1");
  std::vector<double> edges;
  edges.reserve(panel_count() * factor + 1);
  for (std::size_t k = 0; k + 1 < edges_.size(); ++k)
    for (int j = 0; j < factor; ++j)
      edges.push_back(edges_[k] + (edges_[k + 1] - edges_[k]) * j / factor);
  edges.push_back(edges_.back());
  return RadialGrid(std::move(edges), order_);
}

std::vector<double> merge_edges(std::vector<double> edges, double min_width) {
  std::sort(edges.begin(), edges.end());
  std::vector<double> out;
  for (double e : edges)
    if (out.empty() || e - out.back() >= min_width) out.push_back(e);
  // the outermost edge is always kept
  if (!edges.empty() && edges.back() > out.back()) {
    if (out.size() > 1)
      out.back() = edges.back();
    else
      out.push_back(edges.back());
  }
  return out;
}

}  // namespace bcsgl
