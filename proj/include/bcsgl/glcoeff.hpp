#pragma once

#include <cstdint>
#include <string>

#include "bcsgl/gap.hpp"

namespace bcsgl {

/// Grid sizes and cross-check errors behind a set of coefficients.
struct CoefficientProvenance {
  std::string potential;
  double mu = 0.0;
  double Tc = 0.0;
  std::size_t r_nodes = 0;
  std::size_t p_nodes = 0;
  double r_max = 0.0;
  double p_max = 0.0;
  std::size_t alpha_nodes = 0;
  double alpha_r_max = 0.0;
  std::int64_t matsubara_min = 0;
  std::int64_t matsubara_max = 0;
  // relative deviations of the independent routes (negative: not run)
  double lambda2_fd = -1.0;
  double lambda0_hessian = -1.0;
  double lambda0_cross = -1.0;
  double lambda3_matsubara = -1.0;
};

struct GLCoefficients {
  double Lambda0 = 0.0;
  double Lambda2 = 0.0;
  double Lambda3 = 0.0;
  double Dc = 0.0;
  CoefficientProvenance provenance;
};

/// Lambda2 = (beta_c/8) int dp/(2pi)^3 |(-2) V^alpha*|^2 cosh^-2(beta_c (p^2-mu)/2).
double lambda2(const GapSolution& sol, double mu);
/// Lambda0 = (beta_c^2/16) int dp/(2pi)^3 |(-2) V^alpha*|^2 [g1 + (2/3) beta_c p^2 g2](beta_c (p^2-mu)).
double lambda0(const GapSolution& sol, double mu);
/// Lambda3 = (beta_c^2/16) int dp/(2pi)^3 |(-2) V^alpha*|^4 g1(beta_c (p^2-mu)) / (p^2-mu).
double lambda3(const GapSolution& sol, double mu);

/// 2 Lambda0 / Lambda2; throws DivisionGuard when Lambda2 = 0.
double critical_ratio_Dc(double Lambda0, double Lambda2);
double critical_ratio_Dc(const GLCoefficients& c);

// ---- independent routes ----------------------------------------------------

/// Richardson extrapolation of int dp/(2pi)^3 [K_T^-1 - K_Tc^-1] |(-2)V^alpha*|^2 / (4 delta)
/// at T = Tc (1 - delta), delta in {delta1, delta2}.
double lambda2_finite_difference(const GapSolution& sol, double mu, double delta1 = 1e-3, double delta2 = 1e-4);
/// Lambda0 with the g1/g2 bracket replaced by the angular average of the
/// numerical q-Hessian of L_Tc(p + q/2, p - q/2).
double lambda0_hessian(const GapSolution& sol, double mu);
/// Lambda0 written through derivatives of f(E) = tanh(beta_c E / 2).
double lambda0_tanh_form(const GapSolution& sol, double mu);

struct MatsubaraRoute {
  double value = 0.0;
  std::int64_t min_cutoff = 0;
  std::int64_t max_cutoff = 0;
};
/// Lambda3 with g1(beta E)/E replaced by the truncated Matsubara sum
/// (2/beta) sum_n [(i w_n - E)^2 (i w_n + E)^2]^-1 times 2/beta^2.
MatsubaraRoute lambda3_matsubara(const GapSolution& sol, double mu);

struct CoefficientOptions {
  bool cross_checks = true;
};

GLCoefficients compute_coefficients(const GapSolution& sol, const CoefficientOptions& opts = {});

struct TcShift {
  double B = 0.0;
  double T = 0.0;
  bool valid = true;  // false once T_c (1 - Dc B) <= 0
};

/// T_c (1 - Dc B).
TcShift tc_shift(double Tc, double Dc, double B);

}  // namespace bcsgl
