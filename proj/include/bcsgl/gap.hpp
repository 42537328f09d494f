#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "bcsgl/model.hpp"
#include "bcsgl/potential.hpp"

namespace bcsgl {

/// Discretization of the gap problem. Zero means "derive from the potential".
struct GridConfig {
  int r_order = 24;
  double r_panel = 0.0;  // default: potential length scale
  double r_max = 0.0;    // default: potential support radius
  int p_order = 20;
  double p_panel = 0.0;  // default: 0.5 / length scale
  double p_max = 0.0;    // default: potential momentum cutoff
  bool fermi_grading = true;
  int refine = 1;                // every panel split in this many parts
  double out_decay_lengths = 36.0;  // alpha* is tabulated up to this many decay lengths
  double out_panel = 1.0;

  GridConfig doubled() const {
    GridConfig g = *this;
    g.refine *= 2;
    return g;
  }
};

/// Panels in r, with the potential's breakpoints as edges.
RadialGrid make_radial_grid(const Potential& V, const GridConfig& cfg);

/// Panels in p on [0, p_max], graded geometrically towards the Fermi momentum
/// sqrt(mu) (when mu > 0) down to the width over which 1/K_T varies at T_ref.
RadialGrid make_momentum_grid(const Potential& V, double mu, double T_ref, const GridConfig& cfg);

/// s-wave kernel of K_T^-1: (2/pi) int_0^inf p^2 j0(p r) j0(p r') / K_T(p^2 - mu) dp.
/// The 1/max(r, r') part (p^2/K_T replaced by 1) is added analytically; the
/// rest is integrated until its tail bound drops below `tail_tolerance`.
double swave_kt_inverse_kernel(double r, double rp, double T, double mu, double tail_tolerance = 1e-11);

/// Nystrom discretization of V^1/2 K_T^-1 V^1/2 on the r-grid, with K_T^-1
/// diagonal on the p-grid: matrix = C C^T where
/// C_ik = sqrt(w_i) r_i V^1/2(r_i) j0(p_k r_i) sqrt(2 w_k / pi) p_k / sqrt(K_T(p_k^2 - mu)).
class BirmanSchwingerOperator {
 public:
  BirmanSchwingerOperator(const RadialFunction& V, const RadialGrid& pgrid, double mu);

  /// Matrix at temperature T.
  Eigen::MatrixXd matrix(double T) const;
  /// Largest eigenvalue and eigenvector at T, sign fixed so sum_i s_i phi_i >= 0.
  std::pair<double, Eigen::VectorXd> top(double T) const;
  /// d eta / dT on the top eigenvector (Hellmann-Feynman).
  double top_derivative(double T, const Eigen::VectorXd& phi) const;

  const RadialGrid& rgrid() const { return rgrid_; }
  const RadialGrid& pgrid() const { return pgrid_; }
  double mu() const { return mu_; }
  /// sqrt(w_i) r_i V^1/2(r_i)
  const Eigen::VectorXd& weight_root() const { return s_; }
  /// j0(p_k r_i)
  const Eigen::MatrixXd& bessel() const { return j_; }

 private:
  RadialGrid rgrid_;
  RadialGrid pgrid_;
  double mu_;
  Eigen::VectorXd s_;
  Eigen::MatrixXd j_;  // r x p
  Eigen::MatrixXd sj_;  // diag(s) j
};

struct TopEigenpair {
  double eta = 0.0;
  Eigen::VectorXd phi;
};

TopEigenpair bs_top_eigenpair(double T, const RadialFunction& V, double mu, const RadialGrid& pgrid);

struct GapSolution {
  double Tc = 0.0;
  double mu = 0.0;
  double eta = 0.0;
  double eta_residual = 0.0;
  double gap_residual = 0.0;
  double kappa = 0.0;
  double e0 = 0.0;
  bool degenerate = false;  // kappa below the configured tolerance
  double norm_momentum = 0.0;  // ||alpha*|| on the p-grid after position-space normalization
  int bisection_steps = 0;
  std::string potential;
  RadialFunction alpha_star;          // on the output r-grid, ||alpha*||_2 = 1
  RadialMomentumFunction v_alpha_hat;  // (V alpha*)^ on the solver p-grid
  RadialMomentumFunction v_alpha_hat_fine;  // same on the output p-grid
  RadialGrid rgrid;                   // solver r-grid
};

struct GapOptions {
  GridConfig grid;
  double eta_tolerance = 1e-10;
  int newton_steps = 3;
  int max_bisection = 200;
  double kappa_tolerance = 1e-8;
};

/// Solves eta(Tc) = 1 by bisection on the bracket followed by Newton steps,
/// then reconstructs alpha* = K_Tc^-1 V^1/2 phi and fills residuals and kappa.
GapSolution critical_temperature(const Potential& V, double mu, std::pair<double, double> bracket,
                                 const GapOptions& opts = {});

/// ||K_Tc alpha* - V alpha*||_2 / ||V alpha*||_2 in the momentum representation,
/// with both transforms recomputed from the tabulated alpha*.
double gap_residual(const GapSolution& sol, const Potential& V, double mu);

struct SpectralGap {
  double e0 = 0.0;
  double e1 = 0.0;
  double kappa = 0.0;
  bool degenerate = false;  // kappa below tolerance
  bool bound_state = true;  // false when V vanishes and e0 is just min K_T
};

/// Two lowest eigenvalues of K_Tc - V in the s-wave sector, discretized on the
/// momentum grid.
SpectralGap spectral_gap(const Potential& V, double mu, double Tc, const GridConfig& grid = {},
                         double kappa_tolerance = 1e-8);

struct MomentEntry {
  int nu = 0;
  double value = 0.0;       // int |x|^2nu (|alpha|^2 + |grad alpha|^2) dx
  double tail_share = 0.0;  // last-panel share of the integral
};

/// Decay moments of alpha*; throws DecayViolation when a tail share exceeds
/// `tail_tolerance`.
std::vector<MomentEntry> moment_check(const RadialFunction& alpha_star, int nu_max,
                                      double tail_tolerance = 1e-10);

}  // namespace bcsgl
