#include "bcsgl/model.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bcsgl/error.hpp"

namespace bcsgl {

using std::numbers::pi;

PhysParams::PhysParams(double mu, double T, double B) : mu_(mu), T_(T), B_(B), beta_(1.0 / T) {
  if (!std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be finite");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidArgument, "temperature must be positive");
  if (!(B >= 0.0) || !std::isfinite(B)) throw Error(ErrorKind::InvalidArgument, "field strength must be >= 0");
}

RadialFunction::RadialFunction(RadialGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw Error(ErrorKind::InvalidGrid, "values do not match grid size");
}

RadialMomentumFunction::RadialMomentumFunction(RadialGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw Error(ErrorKind::InvalidGrid, "values do not match grid size");
}

double spherical_j0(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double spherical_j1(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double x2 = x * x;
    return x / 3.0 * (1.0 - x2 / 10.0 + x2 * x2 / 280.0);
  }
  return (std::sin(x) / x - std::cos(x)) / x;
}

namespace {

void check_tail(const RadialFunction& f, const FourierOptions& opts) {
  const auto r = f.grid.nodes();
  const auto w = f.grid.weights();
  const std::size_t per_panel = static_cast<std::size_t>(f.grid.order());
  KahanSum<double> total, last;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double c = w[i] * r[i] * r[i] * std::abs(f.values[i]);
    total += c;
    if (i + per_panel >= r.size()) last += c;
  }
  if (total.value() > 0.0 && last.value() > opts.tail_tolerance * total.value()) {
    std::ostringstream msg;
    msg << "radial function not decayed at r = " << f.grid.upper() << " (last panel share "
        << last.value() / total.value() << ")";
    throw Error(ErrorKind::Truncation, msg.str());
  }
}

}  // namespace

RadialMomentumFunction radial_fourier(const RadialFunction& f, const RadialGrid& pgrid,
                                      const FourierOptions& opts) {
  require_ascending(pgrid.nodes(), "momentum grid");
  check_tail(f, opts);
  const auto r = f.grid.nodes();
  const auto w = f.grid.weights();
  std::vector<double> out(pgrid.size());
  for (std::size_t k = 0; k < pgrid.size(); ++k) {
    const double p = pgrid.nodes()[k];
    KahanSum<double> acc;
    for (std::size_t i = 0; i < r.size(); ++i) acc += w[i] * r[i] * r[i] * spherical_j0(p * r[i]) * f.values[i];
    out[k] = 4.0 * pi * acc.value();
  }
  return {pgrid, std::move(out)};
}

double radial_fourier_inverse_at(const RadialMomentumFunction& fhat, double r) {
  const auto p = fhat.grid.nodes();
  const auto w = fhat.grid.weights();
  KahanSum<double> acc;
  for (std::size_t k = 0; k < p.size(); ++k) acc += w[k] * p[k] * p[k] * spherical_j0(p[k] * r) * fhat.values[k];
  return acc.value() / (2.0 * pi * pi);
}

RadialFunction radial_fourier_inverse(const RadialMomentumFunction& fhat, const RadialGrid& rgrid) {
  std::vector<double> out(rgrid.size());
  for (std::size_t i = 0; i < rgrid.size(); ++i) out[i] = radial_fourier_inverse_at(fhat, rgrid.nodes()[i]);
  return {rgrid, std::move(out)};
}

double weighted_norm(const RadialFunction& f, int a, NormKind kind) {
  if (a < 0) throw Error(ErrorKind::InvalidArgument, "weight exponent must be >= 0");
  const auto r = f.grid.nodes();
  const auto w = f.grid.weights();
  KahanSum<double> acc;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = std::abs(f.values[i]);
    if (kind == NormKind::L1)
      acc += w[i] * std::pow(r[i], a + 2) * v;
    else
      acc += w[i] * std::pow(r[i], 2 * a + 2) * v * v;
  }
  const double integral = 4.0 * pi * acc.value();
  return kind == NormKind::L1 ? integral : std::sqrt(integral);
}

double radial_volume_moment(const RadialGrid& grid) {
  KahanSum<double> acc;
  for (std::size_t i = 0; i < grid.size(); ++i) acc += grid.weights()[i] * grid.nodes()[i] * grid.nodes()[i];
  return acc.value();
}

namespace {

// Barycentric weights of the reference Gauss-Legendre nodes.
std::vector<double> barycentric_weights(std::span<const double> x) {
  std::vector<double> bw(x.size(), 1.0);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = 0; k < x.size(); ++k)
      if (k != j) bw[j] /= (x[j] - x[k]);
  return bw;
}

}  // namespace

std::vector<double> spectral_derivative(const RadialFunction& f) {
  const int n = f.grid.order();
  const auto& rule = gauss_legendre(n);
  const auto bw = barycentric_weights(rule.nodes);
  // reference differentiation matrix on [-1, 1]
  std::vector<double> dmat(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = bw[j] / bw[i] / (rule.nodes[i] - rule.nodes[j]);
      dmat[i * n + j] = v;
      diag -= v;
    }
    dmat[i * n + i] = diag;
  }
  std::vector<double> out(f.size());
  const auto edges = f.grid.edges();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double scale = 2.0 / (edges[p + 1] - edges[p]);
    const std::size_t off = p * n;
    for (int i = 0; i < n; ++i) {
      KahanSum<double> acc;
      for (int j = 0; j < n; ++j) acc += dmat[i * n + j] * f.values[off + j];
      out[off + i] = scale * acc.value();
    }
  }
  return out;
}

double interpolate(const RadialFunction& f, double r) {
  const auto edges = f.grid.edges();
  if (r < edges.front() || r > edges.back()) return 0.0;
  std::size_t p = 0;
  while (p + 2 < edges.size() && r > edges[p + 1]) ++p;
  const int n = f.grid.order();
  const auto& rule = gauss_legendre(n);
  const auto bw = barycentric_weights(rule.nodes);
  const double x = (2.0 * r - edges[p] - edges[p + 1]) / (edges[p + 1] - edges[p]);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    const double d = x - rule.nodes[j];
    if (d == 0.0) return f.values[p * n + j];
    num += bw[j] / d * f.values[p * n + j];
    den += bw[j] / d;
  }
  return num / den;
}

void write_two_column(std::ostream& os, const RadialGrid& grid, std::span<const double> values,
                      const Metadata& meta) {
  if (values.size() != grid.size()) throw Error(ErrorKind::InvalidGrid, "values do not match grid size");
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << '\n';
  os << "# grid.order = " << grid.order() << '\n';
  os << "# grid.edges = ";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < grid.edges().size(); ++i) os << (i ? "," : "") << grid.edges()[i];
  os << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) os << grid.nodes()[i] << ' ' << values[i] << '\n';
}

TwoColumnData read_two_column(std::istream& is) {
  TwoColumnData data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t#");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
      };
      data.meta[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      continue;
    }
    std::istringstream ls(line);
    double x = 0.0, y = 0.0;
    if (!(ls >> x >> y)) throw Error(ErrorKind::Io, "malformed data line " + std::to_string(lineno));
    data.nodes.push_back(x);
    data.values.push_back(y);
  }
  require_ascending(data.nodes, "two-column nodes");
  return data;
}

RadialFunction radial_function_from(const TwoColumnData& data) {
  const auto order_it = data.meta.find("grid.order");
  const auto edges_it = data.meta.find("grid.edges");
  if (order_it == data.meta.end() || edges_it == data.meta.end())
    throw Error(ErrorKind::Io, "two-column file lacks grid.order / grid.edges metadata");
  std::vector<double> edges;
  std::istringstream es(edges_it->second);
  std::string tok;
  while (std::getline(es, tok, ',')) edges.push_back(std::stod(tok));
  RadialGrid grid(std::move(edges), std::stoi(order_it->second));
  if (grid.size() != data.nodes.size()) throw Error(ErrorKind::InvalidGrid, "grid metadata does not match data");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid.nodes()[i] - data.nodes[i]) > 1e-12 * (1.0 + std::abs(data.nodes[i])))
      throw Error(ErrorKind::InvalidGrid, "node mismatch against grid metadata");
  return {std::move(grid), data.values};
}

}  // namespace bcsgl
