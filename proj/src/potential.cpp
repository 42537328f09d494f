#include "bcsgl/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bcsgl/error.hpp"

namespace bcsgl {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

class GaussianPotential final : public Potential {
 public:
  GaussianPotential(double v0, double a) : v0_(v0), a_(a) {
    if (!(v0 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "gaussian: v0 must be >= 0");
    if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "gaussian: a must be > 0");
  }
  double operator()(double r) const override { return v0_ * std::exp(-(r / a_) * (r / a_)); }
  std::string describe() const override { return "gaussian(v0=" + fmt(v0_) + ",a=" + fmt(a_) + ")"; }
  // sqrt(V) = sqrt(v0) exp(-r^2 / (2 a^2)) < 1e-17 sqrt(v0)
  double support_radius() const override { return a_ * std::sqrt(2.0 * 39.2); }
  double length_scale() const override { return a_; }
  double momentum_cutoff() const override { return 13.0 / a_; }

 private:
  double v0_, a_;
};

class YukawaCutPotential final : public Potential {
 public:
  YukawaCutPotential(double v0, double a, double rc) : v0_(v0), a_(a), rc_(rc) {
    if (!(v0 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "yukawa-cut: v0 must be >= 0");
    if (!(a > 0.0) || !(rc > 0.0)) throw Error(ErrorKind::InvalidArgument, "yukawa-cut: a and rc must be > 0");
  }
  double operator()(double r) const override { return v0_ * std::exp(-r / a_) / std::max(r, rc_); }
  std::string describe() const override {
    return "yukawa-cut(v0=" + fmt(v0_) + ",a=" + fmt(a_) + ",rc=" + fmt(rc_) + ")";
  }
  double support_radius() const override { return rc_ + 2.0 * 39.2 * a_; }
  double length_scale() const override { return std::min(a_, std::max(rc_, 0.25 * a_)); }
  std::vector<double> breakpoints() const override { return {rc_}; }
  // the kink at rc gives algebraic decay in momentum space; the gap solver
  // reports the resulting momentum tail
  double momentum_cutoff() const override { return 40.0 / length_scale(); }

 private:
  double v0_, a_, rc_;
};

class TabulatedPotential final : public Potential {
 public:
  TabulatedPotential(std::vector<double> r, std::vector<double> v, std::string source)
      : r_(std::move(r)), v_(std::move(v)), source_(std::move(source)) {
    if (r_.size() < 3 || r_.size() != v_.size())
      throw Error(ErrorKind::InvalidArgument, "tabulated potential needs >= 3 samples");
    require_ascending(r_, "tabulated potential");
    for (double x : v_)
      if (!(x >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tabulated potential must be nonnegative");
    build_spline();
  }
  double operator()(double r) const override {
    if (r > r_.back()) return 0.0;
    if (r <= r_.front()) return v_.front();
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
    const double h = r_[i + 1] - r_[i];
    const double t = (r - r_[i]) / h;
    const double a = 1.0 - t;
    const double y = a * v_[i] + t * v_[i + 1] +
                     ((a * a * a - a) * m_[i] + (t * t * t - t) * m_[i + 1]) * h * h / 6.0;
    return std::max(0.0, y);
  }
  std::string describe() const override { return "file(" + source_ + ")"; }
  double support_radius() const override { return r_.back(); }
  double length_scale() const override { return std::max(r_.back() / 20.0, 1e-3); }
  double momentum_cutoff() const override { return 40.0 / length_scale(); }

 private:
  void build_spline() {
    // natural spline second derivatives via the tridiagonal (Thomas) solve
    const std::size_t n = r_.size();
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = r_[i] - r_[i - 1], h1 = r_[i + 1] - r_[i];
      const double rhs = 6.0 * ((v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0);
      const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
      c[i] = h1 / diag;
      d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  std::vector<double> r_, v_, m_;
  std::string source_;
};

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "potential: cannot parse number '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

std::shared_ptr<const Potential> gaussian_potential(double v0, double a) {
  return std::make_shared<GaussianPotential>(v0, a);
}

std::shared_ptr<const Potential> yukawa_cut_potential(double v0, double a, double rc) {
  return std::make_shared<YukawaCutPotential>(v0, a, rc);
}

std::shared_ptr<const Potential> tabulated_potential(std::vector<double> r, std::vector<double> v,
                                                     std::string source) {
  return std::make_shared<TabulatedPotential>(std::move(r), std::move(v), std::move(source));
}

std::shared_ptr<const Potential> parse_potential(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::InvalidArgument, "potential: expected FAMILY:PARAMS, got '" + spec + "'");
  const std::string family = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (family == "gaussian") {
    const auto p = parse_numbers(rest);
    if (p.size() != 2) throw Error(ErrorKind::InvalidArgument, "gaussian potential takes V0,A");
    return gaussian_potential(p[0], p[1]);
  }
  if (family == "yukawa-cut") {
    const auto p = parse_numbers(rest);
    if (p.size() != 3) throw Error(ErrorKind::InvalidArgument, "yukawa-cut potential takes V0,A,RC");
    return yukawa_cut_potential(p[0], p[1], p[2]);
  }
  if (family == "file") {
    std::ifstream in(rest);
    if (!in) throw Error(ErrorKind::Io, "cannot open potential file '" + rest + "'");
    auto data = read_two_column(in);
    return tabulated_potential(std::move(data.nodes), std::move(data.values), rest);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown potential family '" + family + "'");
}

RadialFunction sample(const Potential& V, const RadialGrid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = V(grid.nodes()[i]);
  return {grid, std::move(v)};
}

}  // namespace bcsgl
