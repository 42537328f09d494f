#include "bcsgl/glcoeff.hpp"

#include <cmath>
#include <numbers>

#include "bcsgl/error.hpp"
#include "bcsgl/symbols.hpp"

namespace bcsgl {

using std::numbers::pi;
namespace sy = symbols;

namespace {

// int dp/(2pi)^3 over radial profiles: (2 pi^2)^-1 int p^2 dp
template <typename F>
double momentum_integral(const RadialMomentumFunction& vhat, F&& f) {
  const auto& g = vhat.grid;
  KahanSum<double> acc;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double p = g.nodes()[k];
    const double W = 4.0 * vhat.values[k] * vhat.values[k];
    acc += g.weights()[k] * p * p / (2.0 * pi * pi) * f(p, W);
  }
  return acc.value();
}

double relative(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

}  // namespace

double lambda2(const GapSolution& sol, double mu) {
  const double beta = 1.0 / sol.Tc;
  return beta / 8.0 * momentum_integral(sol.v_alpha_hat, [&](double p, double W) {
           return W * sy::sech2(0.5 * beta * (p * p - mu));
         });
}

double lambda0(const GapSolution& sol, double mu) {
  const double beta = 1.0 / sol.Tc;
  return beta * beta / 16.0 * momentum_integral(sol.v_alpha_hat, [&](double p, double W) {
           const double z = beta * (p * p - mu);
           return W * (sy::g1(z) + 2.0 / 3.0 * beta * p * p * sy::g2(z));
         });
}

double lambda3(const GapSolution& sol, double mu) {
  const double beta = 1.0 / sol.Tc;
  return beta * beta / 16.0 * momentum_integral(sol.v_alpha_hat, [&](double p, double W) {
           return W * W * beta * sy::g1_over_z(beta * (p * p - mu));
         });
}

double critical_ratio_Dc(double Lambda0, double Lambda2) {
  if (!(Lambda2 > 0.0)) throw Error(ErrorKind::DivisionGuard, "Lambda2 must be > 0 to form Dc");
  return 2.0 * Lambda0 / Lambda2;
}

double critical_ratio_Dc(const GLCoefficients& c) { return critical_ratio_Dc(c.Lambda0, c.Lambda2); }

double lambda2_finite_difference(const GapSolution& sol, double mu, double delta1, double delta2) {
  const double Tc = sol.Tc;
  auto shifted = [&](double delta) {
    const double T = Tc * (1.0 - delta);
    return momentum_integral(sol.v_alpha_hat, [&](double p, double W) {
      const double x = p * p - mu;
      return (sy::kt_inverse(x, T) - sy::kt_inverse(x, Tc)) * W;
    });
  };
  const double i1 = shifted(delta1);
  const double i2 = shifted(delta2);
  const double slope = (delta1 * i2 / delta2 - delta2 * i1 / delta1) / (delta1 - delta2);
  return slope / 4.0;
}

double lambda0_hessian(const GapSolution& sol, double mu) {
  const double T = sol.Tc;
  const double beta = 1.0 / T;
  return beta * beta / 16.0 * momentum_integral(sol.v_alpha_hat, [&](double p, double W) {
           auto second = [&](double h) {
             auto par = [&](double q) { return sy::lt_symbol(std::abs(p + 0.5 * q), std::abs(p - 0.5 * q), T, mu); };
             auto perp = [&](double q) {
               const double pq = std::sqrt(p * p + 0.25 * q * q);
               return sy::lt_symbol(pq, pq, T, mu);
             };
             const double l0 = par(0.0);
             const double hpar = -(par(h) - 2.0 * l0 + par(-h)) / (h * h);
             const double hperp = -(perp(h) - 2.0 * l0 + perp(-h)) / (h * h);
             return (hpar + 2.0 * hperp) / 3.0;
           };
           const double h = 0.1 * T / (p + std::sqrt(T));
           const double coarse = second(h);
           const double fine = second(0.5 * h);
           const double hess = (4.0 * fine - coarse) / 3.0;
           return W * 2.0 / (beta * beta) * hess;
         });
}

double lambda0_tanh_form(const GapSolution& sol, double mu) {
  const double beta = 1.0 / sol.Tc;
  return momentum_integral(sol.v_alpha_hat, [&](double p, double W) {
           const double E = p * p - mu;
           const double z = beta * E;
           double iso;
           if (std::abs(z) < 1e-2) {
             // f/(2E^2) - f'/(2E) by its Taylor series in z
             const double z2 = z * z;
             iso = 0.5 * beta * beta * z * (1.0 / 12.0 - z2 / 60.0 + 17.0 * z2 * z2 / 6720.0 - 31.0 * z2 * z2 * z2 / 362880.0);
           } else {
             const double f = std::tanh(0.5 * z);
             const double f1 = 0.5 * beta * sy::sech2(0.5 * z);
             iso = f / (2.0 * E * E) - f1 / (2.0 * E);
           }
           // -f'' p^2 / (3E) with f'' = -(beta^2/2) sech^2 tanh
           const double t = 0.5 * z;
           const double aniso = std::abs(z) < 1e-2
                                    ? beta * beta * beta * p * p / 12.0 * (1.0 - t * t * (4.0 / 3.0))
                                    : 0.5 * beta * beta * sy::sech2(t) * std::tanh(t) * p * p / (3.0 * E);
           return W * (iso + aniso) / 8.0;
         });
}

MatsubaraRoute lambda3_matsubara(const GapSolution& sol, double mu) {
  const double beta = 1.0 / sol.Tc;
  MatsubaraRoute out;
  out.min_cutoff = std::numeric_limits<std::int64_t>::max();
  out.value = momentum_integral(sol.v_alpha_hat, [&](double p, double W) {
    const double E = p * p - mu;
    const auto N = static_cast<std::int64_t>(1000 + std::ceil(10.0 * beta * std::abs(E) / pi));
    out.min_cutoff = std::min(out.min_cutoff, N);
    out.max_cutoff = std::max(out.max_cutoff, N);
    const auto s = sy::quartic_matsubara_sum(beta, E, {N});
    return W * W * s.value / 8.0;
  });
  return out;
}

GLCoefficients compute_coefficients(const GapSolution& sol, const CoefficientOptions& opts) {
  const double mu = sol.mu;
  GLCoefficients c;
  c.Lambda0 = lambda0(sol, mu);
  c.Lambda2 = lambda2(sol, mu);
  c.Lambda3 = lambda3(sol, mu);
  c.Dc = critical_ratio_Dc(c.Lambda0, c.Lambda2);
  auto& pv = c.provenance;
  pv.potential = sol.potential;
  pv.mu = mu;
  pv.Tc = sol.Tc;
  pv.r_nodes = sol.rgrid.size();
  pv.r_max = sol.rgrid.upper();
  pv.p_nodes = sol.v_alpha_hat.grid.size();
  pv.p_max = sol.v_alpha_hat.grid.upper();
  pv.alpha_nodes = sol.alpha_star.size();
  pv.alpha_r_max = sol.alpha_star.grid.upper();
  if (opts.cross_checks) {
    pv.lambda2_fd = relative(lambda2_finite_difference(sol, mu), c.Lambda2);
    pv.lambda0_hessian = relative(lambda0_hessian(sol, mu), c.Lambda0);
    pv.lambda0_cross = relative(lambda0_tanh_form(sol, mu), c.Lambda0);
    const auto m = lambda3_matsubara(sol, mu);
    pv.lambda3_matsubara = relative(m.value, c.Lambda3);
    pv.matsubara_min = m.min_cutoff;
    pv.matsubara_max = m.max_cutoff;
  }
  return c;
}

TcShift tc_shift(double Tc, double Dc, double B) {
  if (!(B >= 0.0)) throw Error(ErrorKind::InvalidArgument, "field strength must be >= 0");
  if (!(Tc > 0.0)) throw Error(ErrorKind::InvalidArgument, "Tc must be positive");
  TcShift s;
  s.B = B;
  s.T = B == 0.0 ? Tc : Tc * (1.0 - Dc * B);
  s.valid = s.T > 0.0;
  return s;
}

}  // namespace bcsgl
