#include "bcsgl/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <sstream>
#include <vector>

#include "bcsgl/error.hpp"
#include "bcsgl/quadrature.hpp"

namespace bcsgl::symbols {

using std::numbers::pi;

double matsubara_frequency(std::int64_t n, double T) {
  return pi * T * static_cast<double>(2 * n + 1);
}

namespace {

void require_cutoff(const MatsubaraConfig& cfg) {
  if (cfg.cutoff < 1) throw Error(ErrorKind::InvalidArgument, "Matsubara cutoff must be >= 1");
}

// sum_{n >= N} (2n+1)^-k <= 1 / (2 (k-1) (2N-1)^(k-1))
double odd_power_tail(std::int64_t N, int k) {
  return 1.0 / (2.0 * (k - 1) * std::pow(2.0 * static_cast<double>(N) - 1.0, k - 1));
}

}  // namespace

MatsubaraSum cosh2_matsubara_sum(double beta, double z, const MatsubaraConfig& cfg) {
  require_cutoff(cfg);
  const double T = 1.0 / beta;
  KahanSum<double> acc;
  // pairs (n, -n-1) combine to 2 Re (i w_n - z)^-2, innermost first
  for (std::int64_t n = 0; n < cfg.cutoff; ++n) {
    const double w = matsubara_frequency(n, T);
    const double d = w * w + z * z;
    acc += 2.0 * (z * z - w * w) / (d * d);
  }
  MatsubaraSum out;
  out.value = 2.0 / beta * acc.value();
  out.tail_bound = 2.0 / beta * 2.0 * (beta / pi) * (beta / pi) * odd_power_tail(cfg.cutoff, 2);
  out.cutoff = cfg.cutoff;
  return out;
}

MatsubaraSum cosh2_matsubara_sum_accelerated(double beta, double z, const MatsubaraConfig& cfg) {
  require_cutoff(cfg);
  const double T = 1.0 / beta;
  const double z2 = z * z;
  KahanSum<double> acc;
  for (std::int64_t n = 0; n < cfg.cutoff; ++n) {
    const double w = matsubara_frequency(n, T);
    const double w2 = w * w;
    const double d = w2 + z2;
    // 2(z^2 - w^2)/(w^2 + z^2)^2 + 2/w^2
    acc += 2.0 * z2 * (3.0 * w2 + z2) / (w2 * d * d);
  }
  // the subtracted -2/w_n^2 summed over all n >= 0 is -beta^2/4
  MatsubaraSum out;
  out.value = 2.0 / beta * acc.value() - beta / 2.0;
  const double bp = beta / pi;
  out.tail_bound = 2.0 / beta *
                   (6.0 * z2 * std::pow(bp, 4) * odd_power_tail(cfg.cutoff, 4) +
                    2.0 * z2 * z2 * std::pow(bp, 6) * odd_power_tail(cfg.cutoff, 6));
  out.cutoff = cfg.cutoff;
  return out;
}

MatsubaraSum quartic_matsubara_sum(double beta, double E, const MatsubaraConfig& cfg) {
  require_cutoff(cfg);
  const double T = 1.0 / beta;
  KahanSum<double> acc;
  for (std::int64_t n = 0; n < cfg.cutoff; ++n) {
    const double w = matsubara_frequency(n, T);
    const double d = w * w + E * E;
    acc += 2.0 / (d * d);
  }
  MatsubaraSum out;
  out.value = 2.0 / beta * acc.value();
  out.tail_bound = 4.0 / beta * std::pow(beta / pi, 4) * odd_power_tail(cfg.cutoff, 4);
  out.cutoff = cfg.cutoff;
  return out;
}

double kt_symbol(double x, double T) {
  const double y = x / (2.0 * T);
  if (std::abs(y) < 1e-4) {
    const double y2 = y * y;
    return 2.0 * T * (1.0 + y2 / 3.0 - y2 * y2 / 45.0);
  }
  return x / std::tanh(y);
}

double kt_inverse(double x, double T) {
  const double y = x / (2.0 * T);
  if (std::abs(y) < 1e-4) {
    const double y2 = y * y;
    return (1.0 - y2 / 3.0 + 2.0 * y2 * y2 / 15.0) / (2.0 * T);
  }
  return std::tanh(y) / x;
}

double sech2(double x) {
  const double ax = std::abs(x);
  if (ax > 350.0) return 0.0;
  const double c = std::cosh(ax);
  return 1.0 / (c * c);
}

double kt_inverse_dT(double x, double T) { return -sech2(x / (2.0 * T)) / (2.0 * T * T); }

double lt_symbol_energies(double a, double b, double T) {
  if (b < a) std::swap(a, b);
  const double beta = 1.0 / T;
  const double s = a + b;
  const double x = 0.5 * beta * a;
  const double y = 0.5 * beta * b;
  if (std::abs(s) < 1e-8 * (1.0 + std::abs(a))) {
    // expansion of tanh(beta b / 2) around b = -a to first order in s
    const double sc = sech2(x);
    return 0.5 * beta * sc + 0.25 * beta * beta * sc * std::tanh(x) * s;
  }
  if ((x >= 0.0) == (y >= 0.0)) return (std::tanh(x) + std::tanh(y)) / s;
  // opposite signs: tanh x + tanh y = sinh(x + y) / (cosh x cosh y)
  if (std::max(std::abs(x), std::abs(y)) < 300.0) return std::sinh(x + y) / (s * std::cosh(x) * std::cosh(y));
  auto log_cosh = [](double u) { return std::abs(u) + std::log1p(std::exp(-2.0 * std::abs(u))) - std::log(2.0); };
  const double xy = x + y;
  const double log_sinh = std::abs(xy) + std::log1p(-std::exp(-2.0 * std::abs(xy))) - std::log(2.0);
  return std::copysign(std::exp(log_sinh - log_cosh(x) - log_cosh(y)), xy) / s;
}

double lt_symbol(double p, double q, double T, double mu) {
  return lt_symbol_energies(p * p - mu, q * q - mu, T);
}

double g1(double z) {
  const double az = std::abs(z);
  if (az < 1e-3) {
    const double z2 = z * z;
    return z * (1.0 / 12.0 - z2 / 60.0 + 17.0 * z2 * z2 / 6720.0);
  }
  if (az < 1.0) {
    // (sinh z - z) / (2 z^2 cosh^2(z/2)) with sinh z - z from its series
    const double z2 = z * z;
    double term = z * z2 / 6.0, acc = 0.0;
    for (int k = 1; k < 12; ++k) {
      acc += term;
      term *= z2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    const double c = std::cosh(0.5 * z);
    return acc / (2.0 * z2 * c * c);
  }
  return std::tanh(0.5 * z) / (z * z) - sech2(0.5 * z) / (2.0 * z);
}

double g1_over_z(double z) {
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    return 1.0 / 12.0 - z2 / 60.0 + 17.0 * z2 * z2 / 6720.0;
  }
  return g1(z) / z;
}

double g2(double z) {
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    return 0.25 - z2 / 12.0 + 17.0 * z2 * z2 / 960.0;
  }
  return std::tanh(0.5 * z) * sech2(0.5 * z) / (2.0 * z);
}

namespace {

cplx resolvent_root(cplx z, double mu) { return std::sqrt(-(z + mu)); }

}  // namespace

cplx g0_kernel(double x, cplx z, double mu) {
  if (x == 0.0) throw Error(ErrorKind::SingularEvaluation, "g0 kernel is singular at x = 0");
  const cplx w = -(z + mu);
  if (w.imag() == 0.0 && w.real() <= 0.0) {
    std::ostringstream msg;
    msg << "z = " << z << " lies on the cut [-mu, inf)";
    throw Error(ErrorKind::BranchCut, msg.str());
  }
  const double r = std::abs(x);
  return -std::exp(-std::sqrt(w) * r) / (4.0 * pi * r);
}

double g0_weighted_l1(double a, cplx z, double mu) {
  if (!(a > -2.0)) throw Error(ErrorKind::InvalidArgument, "weighted L1 norm of g0 needs a > -2");
  const double c = resolvent_root(z, mu).real();
  if (!(c > 0.0)) throw Error(ErrorKind::Divergence, "Re sqrt(-(z+mu)) = 0: kernel not integrable");
  return std::tgamma(a + 2.0) / std::pow(c, a + 2.0);
}

double g0_weighted_l1_quadrature(double a, cplx z, double mu) {
  if (!(a > -2.0)) throw Error(ErrorKind::InvalidArgument, "weighted L1 norm of g0 needs a > -2");
  const double c = resolvent_root(z, mu).real();
  if (!(c > 0.0)) throw Error(ErrorKind::Divergence, "Re sqrt(-(z+mu)) = 0: kernel not integrable");
  // integrate 4 pi r^(a+2) |g0(r)| in the scaled variable u = c r, graded
  // towards the origin where r^(a+1) is not smooth for non-integer a
  std::vector<double> edges{0.0};
  for (int k = 40; k >= 1; --k) edges.push_back(std::ldexp(1.0, -k));
  const double umax = 90.0 + 4.0 * std::max(a, 0.0);
  for (double u = 1.0; u < umax; u += 1.0) edges.push_back(u + 1.0);
  const RadialGrid grid(std::move(edges), 24);
  // for -2 < a < -1 map r = v^m, m = 1/(a+2), which removes the singularity
  const bool singular = a < -1.0;
  const double m = 1.0 / (a + 2.0);
  KahanSum<double> acc;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = grid.nodes()[i];
    const double w = grid.weights()[i];
    if (!singular) {
      const double r = u / c;
      acc += w / c * 4.0 * pi * std::pow(r, a + 2.0) * std::abs(g0_kernel(r, z, mu));
    } else {
      // u plays the role of v (scaled); r = v^m / c, dr = m v^(m-1) dv / c
      const double r = std::pow(u, m) / c;
      const double jac = m * std::pow(u, m - 1.0) / c;
      acc += w * jac * 4.0 * pi * std::pow(r, a + 2.0) * std::abs(g0_kernel(r, z, mu));
    }
  }
  return acc.value();
}

double f_decay(double t, double omega, double mu) {
  const double s = t + mu;
  const double den = std::abs(omega) + std::max(-s, 0.0);
  if (!(den > 0.0)) throw Error(ErrorKind::Divergence, "f(t, w) diverges at w = 0, t + mu >= 0");
  return (std::abs(omega) + std::abs(s)) / (den * den);
}

ContourPath speaker_path(double R, double beta_c, double mu) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "speaker path needs R > 0");
  if (!(beta_c > 0.0)) throw Error(ErrorKind::InvalidArgument, "speaker path needs beta_c > 0");
  const double m = std::min(mu, 1.0);
  const double h = pi / (2.0 * beta_c);
  const cplx ih{0.0, h};
  ContourPath path;
  path.R = R;
  path.beta_c = beta_c;
  path.mu_eff = m;
  // u1 is traversed inwards, u5 outwards; the box in between runs around -(mu+1)
  path.segments[0] = {ih, cplx{1.0, 1.0}, 0.0, R, -1};
  path.segments[1] = {ih, cplx{-(m + 1.0), 0.0}, 0.0, 1.0, +1};
  path.segments[2] = {cplx{-(m + 1.0), 0.0}, -ih, -1.0, 1.0, +1};
  path.segments[3] = {-ih - (m + 1.0), cplx{m + 1.0, 0.0}, 0.0, 1.0, +1};
  path.segments[4] = {-ih, cplx{1.0, -1.0}, 0.0, R, +1};
  return path;
}

namespace {

// w / tanh(beta w / 2) - w = 2 w / (e^{beta w} - 1)
cplx contour_f(cplx w, double beta) {
  const cplx bw = beta * w;
  if (bw.real() > 0.0) {
    const cplx e = std::exp(-bw);
    return 2.0 * w * e / (1.0 - e);
  }
  return 2.0 * w / (std::exp(bw) - 1.0);
}

cplx segment_integral(const PathSegment& s, double x, double beta, int panels, int order) {
  const auto& rule = gauss_legendre(order);
  const double width = (s.t1 - s.t0) / panels;
  KahanSum<cplx> acc;
  for (int p = 0; p < panels; ++p) {
    const double a = s.t0 + p * width;
    for (int j = 0; j < order; ++j) {
      const double t = a + 0.5 * width * (rule.nodes[j] + 1.0);
      const cplx w = s.at(t);
      acc += 0.5 * width * rule.weights[j] * contour_f(w, beta) / (w - x) * s.slope;
    }
  }
  return static_cast<double>(s.orientation) * acc.value();
}

}  // namespace

double kt_contour_eval(double x, double T, double mu, double R, const ContourOptions& opts) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "temperature must be positive");
  const double beta = 1.0 / T;
  const ContourPath path = speaker_path(R, beta, mu);
  if (!(x > -(path.mu_eff + 1.0))) {
    std::ostringstream msg;
    msg << "x = " << x << " is not enclosed by the speaker path (left edge " << -(path.mu_eff + 1.0) << ")";
    throw Error(ErrorKind::Contour, msg.str());
  }
  KahanSum<cplx> total;
  for (const auto& seg : path.segments) {
    int panels = opts.initial_panels;
    cplx prev = segment_integral(seg, x, beta, panels, opts.order);
    for (;;) {
      if (2 * panels > opts.max_panels) {
        std::ostringstream msg;
        msg << "contour quadrature not converged after " << panels << " panels";
        throw Error(ErrorKind::Contour, msg.str());
      }
      panels *= 2;
      const cplx next = segment_integral(seg, x, beta, panels, opts.order);
      const bool done = std::abs(next - prev) < opts.tolerance;
      prev = next;
      if (done) break;
    }
    total += prev;
  }
  const cplx integral = total.value() / cplx{0.0, 2.0 * pi};
  return x + integral.real();
}

double kt_contour_tail_estimate(double x, double T, double R) {
  const double beta = 1.0 / T;
  const double q = std::exp(-beta * R);
  return 2.0 * std::sqrt(2.0) / pi * (1.0 + std::abs(x) / R) * q / (beta * (1.0 - q));
}

}  // namespace bcsgl::symbols
