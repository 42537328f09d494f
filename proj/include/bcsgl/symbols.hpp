#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace bcsgl::symbols {

using cplx = std::complex<double>;

/// Fermionic Matsubara frequency pi T (2n + 1).
double matsubara_frequency(std::int64_t n, double T);

/// Truncation of a symmetric Matsubara sum over n = -N .. N-1 together with a
/// rigorous bound on the omitted |n| >= N part.
struct MatsubaraConfig {
  std::int64_t cutoff = 100000;
};

struct MatsubaraSum {
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t cutoff = 0;
};

/// (2/beta) sum_n (i w_n - z)^-2 by direct truncation; tail bound decays as 1/N.
MatsubaraSum cosh2_matsubara_sum(double beta, double z, const MatsubaraConfig& cfg);

/// Same sum with the exactly summable -2/w_n^2 part of each (n, -n-1) pair
/// removed analytically (sum_{n>=0} (2n+1)^-2 = pi^2/8); the remainder decays as
/// w_n^-4 and its bound as 1/N^3.
MatsubaraSum cosh2_matsubara_sum_accelerated(double beta, double z, const MatsubaraConfig& cfg);

/// (2/beta) sum_n [(i w_n - E)^2 (i w_n + E)^2]^-1.
MatsubaraSum quartic_matsubara_sum(double beta, double E, const MatsubaraConfig& cfg);

/// K_T(x) = x / tanh(x / (2T)); 2T at x = 0.
double kt_symbol(double x, double T);
/// 1 / K_T(x) = tanh(x / (2T)) / x; 1/(2T) at x = 0.
double kt_inverse(double x, double T);
/// d/dT of 1/K_T(x) = -cosh^-2(x / 2T) / (2 T^2).
double kt_inverse_dT(double x, double T);

/// L_T(p, q) = [tanh(beta(p^2-mu)/2) + tanh(beta(q^2-mu)/2)] / (p^2 + q^2 - 2mu)
/// with the removable singularity at p^2 + q^2 = 2mu replaced by its series.
double lt_symbol(double p, double q, double T, double mu);
/// Same symbol written in the energies a = p^2 - mu, b = q^2 - mu.
double lt_symbol_energies(double a, double b, double T);

/// 1 / cosh^2(x), zero when cosh overflows.
double sech2(double x);

/// g1(z) = tanh(z/2)/z^2 - 1/(2 z cosh^2(z/2)); Taylor series for |z| < 1e-3.
double g1(double z);
/// g2(z) = tanh(z/2) / (2 z cosh^2(z/2)); Taylor series for |z| < 1e-3.
double g2(double z);
/// g1(z)/z with its limit 1/12 at z = 0.
double g1_over_z(double z);

/// g0^z(x) = -exp(-sqrt(-(z+mu)) |x|) / (4 pi |x|), standard branch of sqrt.
cplx g0_kernel(double x, cplx z, double mu);
/// int |x|^a |g0^z(x)| dx = Gamma(a+2) / (Re sqrt(-(z+mu)))^(a+2).
double g0_weighted_l1(double a, cplx z, double mu);
/// The same norm by radial quadrature of |g0_kernel|; independent route.
double g0_weighted_l1_quadrature(double a, cplx z, double mu);

/// f(t, w) = (|w| + |t+mu|) / (|w| + (t+mu)_-)^2 with x_- = -min(x, 0).
double f_decay(double t, double omega, double mu);

/// One straight piece u(t) = start + slope * t, t in [t0, t1], traversed in
/// the direction given by `orientation` (+1 forward, -1 reversed).
struct PathSegment {
  cplx start;
  cplx slope;
  double t0;
  double t1;
  int orientation;

  cplx at(double t) const { return start + slope * t; }
  cplx entry() const { return orientation > 0 ? at(t0) : at(t1); }
  cplx exit() const { return orientation > 0 ? at(t1) : at(t0); }
};

/// Five-piece contour (two outgoing rays joined by a box around the left end
/// of the spectrum) used for the Cauchy representation of K_T.
struct ContourPath {
  std::array<PathSegment, 5> segments;
  double R;
  double beta_c;
  double mu_eff;  // mu clamped to 1
};

ContourPath speaker_path(double R, double beta_c, double mu);

struct ContourOptions {
  int order = 20;
  int initial_panels = 4;
  int max_panels = 1 << 14;
  double tolerance = 1e-8;  // successive panel doublings must agree to this
};

/// x + (2 pi i)^-1 int f(w) / (w - x) dw over speaker_path(R, 1/T, mu), with
/// f(w) = w/tanh(w/(2T)) - w; converges to kt_symbol(x, T) as R grows.
double kt_contour_eval(double x, double T, double mu, double R, const ContourOptions& opts = {});

/// Bound on the part of the two rays beyond R, where |f(w)| ~ 2|w| e^{-Re w / T}.
double kt_contour_tail_estimate(double x, double T, double R);

}  // namespace bcsgl::symbols
