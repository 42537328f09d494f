#include "bcsgl/gap.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "bcsgl/error.hpp"
#include "bcsgl/symbols.hpp"

namespace bcsgl {

using std::numbers::pi;
using symbols::kt_inverse;

namespace {

double r_panel_width(const Potential& V, const GridConfig& cfg) {
  return cfg.r_panel > 0.0 ? cfg.r_panel : V.length_scale();
}

double p_panel_width(const Potential& V, const GridConfig& cfg) {
  return cfg.p_panel > 0.0 ? cfg.p_panel : 0.5 / V.length_scale();
}

void check_config(const GridConfig& cfg) {
  if (cfg.r_order < 2 || cfg.p_order < 2) throw Error(ErrorKind::InvalidArgument, "quadrature order must be >= 2");
  if (cfg.refine < 1) throw Error(ErrorKind::InvalidArgument, "grid refinement must be >= 1");
  if (cfg.r_panel < 0.0 || cfg.r_max < 0.0 || cfg.p_panel < 0.0 || cfg.p_max < 0.0 || cfg.out_panel <= 0.0 ||
      cfg.out_decay_lengths <= 0.0)
    throw Error(ErrorKind::InvalidArgument, "grid sizes must be positive");
}

// Uniform edges on [0, pmax] with geometric grading towards kf. Uniform edges
// inside the graded zone are dropped so no sliver panels appear.
std::vector<double> graded_edges(double pmax, double width, double kf, double d) {
  std::vector<double> grading;
  double zone = 0.0;
  if (kf > 0.0 && kf < pmax && d > 0.0 && d < width) {
    grading.push_back(kf);
    for (double s = d; s < width; s *= 2.0) {
      grading.push_back(kf + s);
      if (kf - s > 0.0) grading.push_back(kf - s);
      zone = s;
    }
  }
  const auto n = static_cast<std::size_t>(std::max(1.0, std::round(pmax / width)));
  std::vector<double> edges;
  for (std::size_t k = 0; k <= n; ++k) {
    const double e = pmax * static_cast<double>(k) / static_cast<double>(n);
    if (zone > 0.0 && std::abs(e - kf) < 2.0 * zone && k != 0 && k != n) continue;
    edges.push_back(e);
  }
  edges.back() = pmax;
  for (double g : grading)
    if (g < pmax) edges.push_back(g);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

RadialGrid make_radial_grid(const Potential& V, const GridConfig& cfg) {
  check_config(cfg);
  const double width = r_panel_width(V, cfg);
  const double rmax = cfg.r_max > 0.0 ? cfg.r_max : V.support_radius();
  const auto base = RadialGrid::uniform(0.0, rmax, width, cfg.r_order);
  std::vector<double> edges(base.edges().begin(), base.edges().end());
  for (double b : V.breakpoints())
    if (b > 0.0 && b < rmax) edges.push_back(b);
  return RadialGrid(merge_edges(std::move(edges), 1e-3 * width), cfg.r_order).refined(cfg.refine);
}

RadialGrid make_momentum_grid(const Potential& V, double mu, double T_ref, const GridConfig& cfg) {
  check_config(cfg);
  if (!(T_ref > 0.0)) throw Error(ErrorKind::InvalidArgument, "reference temperature must be positive");
  const double width = p_panel_width(V, cfg);
  const double pmax = cfg.p_max > 0.0 ? cfg.p_max : V.momentum_cutoff();
  const double kf = mu > 0.0 && cfg.fermi_grading ? std::sqrt(mu) : 0.0;
  const double d = kf > 0.0 ? pi * T_ref / (2.0 * kf) : 0.0;
  return RadialGrid(graded_edges(pmax, width, kf, d), cfg.p_order).refined(cfg.refine);
}

double swave_kt_inverse_kernel(double r, double rp, double T, double mu, double tail_tolerance) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "temperature must be positive");
  if (r < 0.0 || rp < 0.0) throw Error(ErrorKind::InvalidArgument, "radii must be >= 0");
  const double R = std::max(r, rp);
  if (R == 0.0) throw Error(ErrorKind::SingularEvaluation, "s-wave kernel diverges at r = r' = 0");
  // (2/pi) int_0^inf j0(p r) j0(p r') dp = 1/max(r, r')
  const double analytic = 1.0 / R;

  const double width = std::min(0.5, 2.0 / R);
  const double kf = mu > 0.0 ? std::sqrt(mu) : 0.0;
  const double d = kf > 0.0 ? pi * T / (2.0 * kf) : 0.0;
  const int order = 20;
  const auto& rule = gauss_legendre(order);

  auto integrand = [&](double p) {
    const double x = p * p - mu;
    return (p * p * kt_inverse(x, T) - 1.0) * spherical_j0(p * r) * spherical_j0(p * rp);
  };
  auto integrate = [&](const std::vector<double>& edges) {
    KahanSum<double> acc;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double half = 0.5 * (edges[k + 1] - edges[k]);
      const double mid = 0.5 * (edges[k + 1] + edges[k]);
      for (int i = 0; i < order; ++i) acc += half * rule.weights[i] * integrand(mid + half * rule.nodes[i]);
    }
    return acc.value();
  };
  // |p^2/K - 1| <= C/p^2 beyond P once x_P >= 4T
  auto tail = [&](double P) {
    const double x = P * P - mu;
    if (!(x >= 4.0 * T)) return std::numeric_limits<double>::infinity();
    const double C = std::abs(mu) * std::max(1.0, P * P / x) + 2.0 * P * P * P * P / x * std::exp(-x / T);
    double m = 1.0 / P;
    if (r > 0.0 && rp > 0.0) m = std::min(m, 1.0 / (3.0 * P * P * P * r * rp));
    return 2.0 / pi * C * m;
  };

  double P = std::max({8.0, 4.0 * kf, 8.0 * std::sqrt(T)});
  KahanSum<double> total;
  total += integrate(graded_edges(P, width, kf, d));
  const double limit = 1e6;
  while (tail(P) > tail_tolerance) {
    if (P >= limit) {
      std::ostringstream msg;
      msg << "s-wave kernel tail " << tail(P) << " above " << tail_tolerance << " at p = " << P;
      throw Error(ErrorKind::Truncation, msg.str());
    }
    const auto n = static_cast<std::size_t>(std::ceil(P / width));
    std::vector<double> edges(n + 1);
    for (std::size_t k = 0; k <= n; ++k) edges[k] = P + P * static_cast<double>(k) / static_cast<double>(n);
    total += integrate(edges);
    P *= 2.0;
  }
  return analytic + 2.0 / pi * total.value();
}

BirmanSchwingerOperator::BirmanSchwingerOperator(const RadialFunction& V, const RadialGrid& pgrid, double mu)
    : rgrid_(V.grid), pgrid_(pgrid), mu_(mu) {
  require_ascending(pgrid.nodes(), "momentum grid");
  const auto r = rgrid_.nodes();
  const auto w = rgrid_.weights();
  const auto p = pgrid_.nodes();
  s_.resize(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (V.values[i] < 0.0) throw Error(ErrorKind::InvalidArgument, "potential must be nonnegative");
    s_(static_cast<Eigen::Index>(i)) = std::sqrt(w[i]) * r[i] * std::sqrt(V.values[i]);
  }
  j_.resize(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t k = 0; k < p.size(); ++k)
      j_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = spherical_j0(p[k] * r[i]);
  sj_ = s_.asDiagonal() * j_;
}

Eigen::MatrixXd BirmanSchwingerOperator::matrix(double T) const {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "temperature must be positive");
  const auto p = pgrid_.nodes();
  const auto w = pgrid_.weights();
  Eigen::VectorXd d(static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k)
    d(static_cast<Eigen::Index>(k)) = std::sqrt(2.0 * w[k] / pi) * p[k] * std::sqrt(kt_inverse(p[k] * p[k] - mu_, T));
  const Eigen::MatrixXd c = sj_ * d.asDiagonal();
  Eigen::MatrixXd a = c * c.transpose();
  // exact symmetry
  a = 0.5 * (a + a.transpose()).eval();
  return a;
}

std::pair<double, Eigen::VectorXd> BirmanSchwingerOperator::top(double T) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix(T));
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Birman-Schwinger eigensolve failed at T = " << T << " (n = " << s_.size() << ")";
    throw Error(ErrorKind::Solver, msg.str());
  }
  const Eigen::Index n = es.eigenvalues().size();
  Eigen::VectorXd phi = es.eigenvectors().col(n - 1);
  if (s_.dot(phi) < 0.0) phi = -phi;
  return {es.eigenvalues()(n - 1), std::move(phi)};
}

double BirmanSchwingerOperator::top_derivative(double T, const Eigen::VectorXd& phi) const {
  const Eigen::VectorXd u = sj_.transpose() * phi;
  const auto p = pgrid_.nodes();
  const auto w = pgrid_.weights();
  KahanSum<double> acc;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double uk = u(static_cast<Eigen::Index>(k));
    acc += 2.0 / pi * w[k] * p[k] * p[k] * symbols::kt_inverse_dT(p[k] * p[k] - mu_, T) * uk * uk;
  }
  return acc.value();
}

TopEigenpair bs_top_eigenpair(double T, const RadialFunction& V, double mu, const RadialGrid& pgrid) {
  const BirmanSchwingerOperator op(V, pgrid, mu);
  auto [eta, phi] = op.top(T);
  return {eta, std::move(phi)};
}

namespace {

double decay_rate(double mu, double T) {
  return std::sqrt(-std::complex<double>(mu, pi * T)).real();
}

double momentum_norm(const RadialGrid& pgrid, const std::vector<double>& fhat) {
  KahanSum<double> acc;
  for (std::size_t k = 0; k < pgrid.size(); ++k)
    acc += pgrid.weights()[k] * pgrid.nodes()[k] * pgrid.nodes()[k] * fhat[k] * fhat[k];
  return std::sqrt(acc.value() / (2.0 * pi * pi));
}

}  // namespace

GapSolution critical_temperature(const Potential& V, double mu, std::pair<double, double> bracket,
                                 const GapOptions& opts) {
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo)) throw Error(ErrorKind::InvalidArgument, "bracket must satisfy 0 < T_lo < T_hi");
  if (!std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be finite");
  const GridConfig& cfg = opts.grid;
  const RadialGrid rgrid = make_radial_grid(V, cfg);
  const RadialFunction Vr = sample(V, rgrid);
  const RadialGrid pgrid = make_momentum_grid(V, mu, lo, cfg);
  const BirmanSchwingerOperator op(Vr, pgrid, mu);

  const double eta_lo = op.top(lo).first;
  const double eta_hi = op.top(hi).first;
  if (!(eta_lo > 1.0 && eta_hi < 1.0)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "eta(" << lo << ") = " << eta_lo << ", eta(" << hi << ") = " << eta_hi << "; need eta(T_lo) > 1 > eta(T_hi)";
    throw Error(ErrorKind::NoRoot, msg.str());
  }

  GapSolution sol;
  sol.mu = mu;
  sol.potential = V.describe();
  sol.rgrid = rgrid;
  int steps = 0;
  while (hi - lo > opts.eta_tolerance * hi) {
    if (steps++ >= opts.max_bisection) throw Error(ErrorKind::NonConvergence, "bisection step cap reached");
    const double mid = 0.5 * (lo + hi);
    const double eta = op.top(mid).first;
    if (eta > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  sol.bisection_steps = steps;
  double T = 0.5 * (lo + hi);
  auto [eta, phi] = op.top(T);
  for (int k = 0; k < opts.newton_steps; ++k) {
    const double slope = op.top_derivative(T, phi);
    if (!(slope < 0.0)) break;
    const double next = T - (eta - 1.0) / slope;
    if (!(next > lo - (hi - lo)) || !(next < hi + (hi - lo))) break;
    auto [eta_n, phi_n] = op.top(next);
    if (std::abs(eta_n - 1.0) > std::abs(eta - 1.0)) break;
    T = next;
    eta = eta_n;
    phi = std::move(phi_n);
  }
  sol.Tc = T;
  sol.eta = eta;
  sol.eta_residual = std::abs(eta - 1.0);

  // V alpha* on the r-grid, up to normalization: phi = sqrt(w) r V^1/2 alpha*
  const auto r = rgrid.nodes();
  const auto w = rgrid.weights();
  std::vector<double> valpha(rgrid.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    valpha[i] = std::sqrt(Vr.values[i]) * phi(static_cast<Eigen::Index>(i)) / (std::sqrt(w[i]) * r[i]);
  const RadialFunction valpha_r(rgrid, valpha);

  const double rate = decay_rate(mu, T);
  const double rout = std::max(rgrid.upper(), cfg.out_decay_lengths / rate);
  const RadialGrid outgrid = RadialGrid::uniform(0.0, rout, cfg.out_panel, 20).refined(cfg.refine);
  GridConfig fine_cfg = cfg;
  fine_cfg.p_panel = std::min(p_panel_width(V, cfg), 10.0 / rout);
  const RadialGrid fine = make_momentum_grid(V, mu, bracket.first, fine_cfg);

  auto vhat_fine = radial_fourier(valpha_r, fine);
  std::vector<double> ahat(fine.size());
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const double p = fine.nodes()[k];
    ahat[k] = vhat_fine.values[k] * kt_inverse(p * p - mu, T);
  }
  auto alpha = radial_fourier_inverse({fine, ahat}, outgrid);
  const double c = weighted_norm(alpha, 0, NormKind::L2);
  if (!(c > 0.0)) throw Error(ErrorKind::DivisionGuard, "alpha* vanishes identically");
  for (double& v : alpha.values) v /= c;
  for (double& v : ahat) v /= c;
  for (double& v : vhat_fine.values) v /= c;
  sol.norm_momentum = momentum_norm(fine, ahat);
  sol.alpha_star = std::move(alpha);
  sol.v_alpha_hat_fine = std::move(vhat_fine);
  auto vhat = radial_fourier(valpha_r, pgrid);
  for (double& v : vhat.values) v /= c;
  sol.v_alpha_hat = std::move(vhat);

  sol.gap_residual = gap_residual(sol, V, mu);
  const auto sg = spectral_gap(V, mu, T, cfg, opts.kappa_tolerance);
  sol.kappa = sg.kappa;
  sol.e0 = sg.e0;
  sol.degenerate = sg.degenerate;
  return sol;
}

double gap_residual(const GapSolution& sol, const Potential& V, double mu) {
  const auto& a = sol.alpha_star;
  std::vector<double> va(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) va[i] = V(a.grid.nodes()[i]) * a.values[i];
  const RadialGrid& pg = sol.v_alpha_hat_fine.grid;
  // alpha* carries inverse-transform roundoff (~1e-16) out to the end of its
  // grid, which sets the attainable tail share
  const FourierOptions fo{1e-10};
  const auto ahat = radial_fourier(a, pg, fo);
  const auto vhat = radial_fourier({a.grid, va}, pg, fo);
  KahanSum<double> num, den;
  for (std::size_t k = 0; k < pg.size(); ++k) {
    const double p = pg.nodes()[k];
    const double m = pg.weights()[k] * p * p;
    const double d = symbols::kt_symbol(p * p - mu, sol.Tc) * ahat.values[k] - vhat.values[k];
    num += m * d * d;
    den += m * vhat.values[k] * vhat.values[k];
  }
  if (!(den.value() > 0.0)) throw Error(ErrorKind::DivisionGuard, "||V alpha*|| = 0: residual undefined");
  return std::sqrt(num.value() / den.value());
}

SpectralGap spectral_gap(const Potential& V, double mu, double Tc, const GridConfig& grid, double kappa_tolerance) {
  if (!(Tc > 0.0)) throw Error(ErrorKind::InvalidArgument, "temperature must be positive");
  const RadialGrid rgrid = make_radial_grid(V, grid);
  const RadialGrid pgrid = make_momentum_grid(V, mu, Tc, grid);
  const auto r = rgrid.nodes();
  const auto wr = rgrid.weights();
  const auto p = pgrid.nodes();
  const auto wp = pgrid.weights();
  const auto nr = static_cast<Eigen::Index>(r.size());
  const auto np = static_cast<Eigen::Index>(p.size());

  // H = diag(K) - sqrt(w_k) p_k (2 pi^2)^-1 V_s(p_k, p_l) p_l sqrt(w_l),
  // V_s(p, q) = 4 pi int r^2 V(r) j0(p r) j0(q r) dr
  Eigen::MatrixXd jw(nr, np);
  bool vanishes = true;
  for (Eigen::Index i = 0; i < nr; ++i) {
    const double v = V(r[i]);
    if (v != 0.0) vanishes = false;
    const double f = std::sqrt(4.0 * pi * wr[i] * v) * r[i];
    for (Eigen::Index k = 0; k < np; ++k) jw(i, k) = f * spherical_j0(p[k] * r[i]) * std::sqrt(wp[k]) * p[k];
  }
  Eigen::MatrixXd h = -(jw.transpose() * jw) / (2.0 * pi * pi);
  for (Eigen::Index k = 0; k < np; ++k) h(k, k) += symbols::kt_symbol(p[k] * p[k] - mu, Tc);
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Solver, "eigensolve of K_T - V failed");
  SpectralGap out;
  out.e0 = es.eigenvalues()(0);
  out.e1 = es.eigenvalues()(1);
  out.kappa = out.e1 - out.e0;
  out.degenerate = out.kappa < kappa_tolerance;
  out.bound_state = !vanishes;
  return out;
}

std::vector<MomentEntry> moment_check(const RadialFunction& alpha_star, int nu_max, double tail_tolerance) {
  if (nu_max < 0) throw Error(ErrorKind::InvalidArgument, "nu_max must be >= 0");
  const auto d = spectral_derivative(alpha_star);
  const auto r = alpha_star.grid.nodes();
  const auto w = alpha_star.grid.weights();
  const std::size_t last = r.size() - static_cast<std::size_t>(alpha_star.grid.order());
  std::vector<MomentEntry> out;
  for (int nu = 0; nu <= nu_max; ++nu) {
    KahanSum<double> total, tail;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double a = alpha_star.values[i];
      const double c = 4.0 * pi * w[i] * std::pow(r[i], 2 * nu + 2) * (a * a + d[i] * d[i]);
      total += c;
      if (i >= last) tail += c;
    }
    MomentEntry e{nu, total.value(), total.value() > 0.0 ? tail.value() / total.value() : 0.0};
    if (!std::isfinite(e.value) || e.tail_share > tail_tolerance) {
      std::ostringstream msg;
      msg << "moment nu = " << nu << " not tail-converged (last panel share " << e.tail_share << ")";
      throw Error(ErrorKind::DecayViolation, msg.str());
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace bcsgl
