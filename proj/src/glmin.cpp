#include "bcsgl/glmin.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <sstream>

#include "bcsgl/error.hpp"

namespace bcsgl {

using std::numbers::pi;

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }
int floor_div(int i, int n) { return (i - wrap(i, n)) / n; }

// Uniform doubles in [-1, 1) from raw generator bits, identical on every platform.
double uniform_pm1(std::mt19937_64& gen) { return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0; }

double mean_abs2(const Eigen::VectorXcd& v) { return v.squaredNorm() / static_cast<double>(v.size()); }

Eigen::Map<const Eigen::VectorXcd> as_vec(const OrderParameterField& f) {
  return {f.values.data(), static_cast<Eigen::Index>(f.values.size())};
}

void check_field(const OrderParameterField& psi, const MagneticCell& cell) {
  if (psi.N != cell.N || psi.values.size() != cell.size())
    throw Error(ErrorKind::InvalidArgument, "order parameter does not live on this cell");
}

void check_coefficients(const GLCoefficients& c) {
  if (!(c.Lambda0 > 0.0) || !(c.Lambda2 > 0.0) || !(c.Lambda3 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "GL coefficients must be positive");
}

}  // namespace

MagneticCell MagneticCell::make(double B, int N, double x0) {
  if (!(B > 0.0) || !std::isfinite(B)) throw Error(ErrorKind::InvalidArgument, "magnetic cell needs B > 0");
  if (N < 4 || N % 2 != 0) throw Error(ErrorKind::InvalidArgument, "cell resolution N must be even and >= 4");
  MagneticCell c;
  c.B = B;
  c.N = N;
  c.side = std::sqrt(2.0 * pi / B);
  c.h = c.side / N;
  c.x0 = x0;
  c.ux.assign(c.size(), cplx{1.0, 0.0});
  c.uy.resize(c.size());
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      c.uy[c.index(j, k)] = std::polar(1.0, 2.0 * B * (j * c.h - x0) * c.h);
      // psi(x + L, y) = exp(-i 2B L y) psi(x, y)
      if (j == N - 1) c.ux[c.index(j, k)] = std::polar(1.0, -2.0 * B * c.side * k * c.h);
    }
  return c;
}

MagneticCell MagneticCell::zero_field(double side, int N) {
  if (!(side > 0.0)) throw Error(ErrorKind::InvalidArgument, "cell side must be positive");
  if (N < 4 || N % 2 != 0) throw Error(ErrorKind::InvalidArgument, "cell resolution N must be even and >= 4");
  MagneticCell c;
  c.N = N;
  c.side = side;
  c.h = side / N;
  c.ux.assign(c.size(), cplx{1.0, 0.0});
  c.uy.assign(c.size(), cplx{1.0, 0.0});
  return c;
}

cplx MagneticCell::plaquette(int j, int k) const {
  const int j1 = wrap(j + 1, N), k1 = wrap(k + 1, N);
  j = wrap(j, N);
  k = wrap(k, N);
  return ux[index(j, k)] * uy[index(j1, k)] * std::conj(ux[index(j, k1)]) * std::conj(uy[index(j, k)]);
}

cplx MagneticCell::total_winding() const {
  cplx w{1.0, 0.0};
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) w *= plaquette(j, k);
  return w;
}

SparseC build_magnetic_laplacian(const MagneticCell& cell) {
  const int N = cell.N;
  const double s = 1.0 / (cell.h * cell.h);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(cell.size() * 5);
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      const auto i = static_cast<Eigen::Index>(cell.index(j, k));
      const int jp = wrap(j + 1, N), jm = wrap(j - 1, N), kp = wrap(k + 1, N), km = wrap(k - 1, N);
      t.emplace_back(i, i, cplx{4.0 * s, 0.0});
      t.emplace_back(i, static_cast<Eigen::Index>(cell.index(jp, k)), -s * cell.ux[cell.index(j, k)]);
      t.emplace_back(i, static_cast<Eigen::Index>(cell.index(jm, k)), -s * std::conj(cell.ux[cell.index(jm, k)]));
      t.emplace_back(i, static_cast<Eigen::Index>(cell.index(j, kp)), -s * cell.uy[cell.index(j, k)]);
      t.emplace_back(i, static_cast<Eigen::Index>(cell.index(j, km)), -s * std::conj(cell.uy[cell.index(j, km)]));
    }
  const auto n = static_cast<Eigen::Index>(cell.size());
  SparseC m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

OrderParameterField magnetic_translate(const MagneticCell& cell, const OrderParameterField& psi, int sx, int sy) {
  check_field(psi, cell);
  const int N = cell.N;
  auto ext = [&](int j, int k) {
    const int jj = wrap(j, N), kk = wrap(k, N);
    const int q = floor_div(j, N);
    return std::polar(1.0, -2.0 * cell.B * cell.side * q * kk * cell.h) * psi.values[cell.index(jj, kk)];
  };
  OrderParameterField out{N, std::vector<cplx>(cell.size())};
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j)
      out.values[cell.index(j, k)] = std::polar(1.0, 2.0 * cell.B * sx * cell.h * k * cell.h) * ext(j + sx, k + sy);
  return out;
}

LandauSpectrum landau_levels(const MagneticCell& cell, int count, double tolerance, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one eigenvalue");
  const SparseC M = build_magnetic_laplacian(cell);
  const auto n = M.rows();
  const int block = std::max(count + 4, 8);
  if (block > n) throw Error(ErrorKind::InvalidArgument, "cell too small for the requested eigenpairs");
  const double shift = cell.B > 0.0 ? cell.B : 1.0;
  SparseC S(n, n);
  S.setIdentity();
  S = M + shift * S;
  Eigen::SimplicialLDLT<SparseC, Eigen::Lower> ldlt(S);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::Solver, "factorization of the magnetic Laplacian failed");

  std::mt19937_64 gen(seed);
  Eigen::MatrixXcd X(n, block);
  for (Eigen::Index c = 0; c < block; ++c)
    for (Eigen::Index i = 0; i < n; ++i) X(i, c) = cplx{uniform_pm1(gen), uniform_pm1(gen)};

  const int max_iter = 2000;
  LandauSpectrum out;
  Eigen::VectorXd theta;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXcd Y = ldlt.solve(X);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXcd::Identity(n, block);
    const Eigen::MatrixXcd MY = M * Y;
    Eigen::MatrixXcd H = Y.adjoint() * MY;
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    theta = es.eigenvalues();
    X = Y * es.eigenvectors();
    const Eigen::MatrixXcd R = MY * es.eigenvectors() - X * theta.asDiagonal();
    bool done = true;
    for (int c = 0; c < count; ++c)
      if (R.col(c).norm() > tolerance * std::max(1.0, std::abs(theta(c)))) done = false;
    if (done) {
      out.iterations = it;
      break;
    }
    if (it == max_iter) {
      std::ostringstream msg;
      msg << "block inverse iteration did not converge in " << max_iter << " iterations";
      throw Error(ErrorKind::Solver, msg.str());
    }
  }
  for (int c = 0; c < count; ++c) {
    out.eigenvalues.push_back(theta(c));
    out.vectors.emplace_back(X.col(c));
  }
  out.lowest_degeneracy = 0;
  for (Eigen::Index c = 0; c < theta.size(); ++c)
    if (std::abs(theta(c) - theta(0)) <= 1e-8 * std::max(1.0, std::abs(theta(0)))) ++out.lowest_degeneracy;
  return out;
}

double lowest_landau_eigenvalue(const MagneticCell& cell) { return landau_levels(cell, 1).eigenvalues.front(); }

namespace {

struct Parts {
  double kinetic = 0.0;  // mean conj(psi) M psi
  double mass = 0.0;     // mean |psi|^2
  double quartic = 0.0;  // mean |psi|^4
};

Parts energy_parts(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& Mpsi) {
  const double n = static_cast<double>(psi.size());
  KahanSum<double> kin, mass, quart;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double a2 = std::norm(psi(i));
    kin += (std::conj(psi(i)) * Mpsi(i)).real();
    mass += a2;
    quart += a2 * a2;
  }
  return {kin.value() / n, mass.value() / n, quart.value() / n};
}

double combine(const Parts& p, double D, const GLCoefficients& c, double B) {
  return (c.Lambda0 * p.kinetic - D * B * c.Lambda2 * p.mass + c.Lambda3 * p.quartic) / (B * B);
}

Eigen::VectorXcd gradient(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& Mpsi, double D,
                          const GLCoefficients& c, double B) {
  Eigen::VectorXcd g(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    g(i) = (c.Lambda0 * Mpsi(i) - D * B * c.Lambda2 * psi(i) + 2.0 * c.Lambda3 * std::norm(psi(i)) * psi(i)) / (B * B);
  return g;
}

}  // namespace

double gl_energy(const OrderParameterField& psi, double D, const GLCoefficients& c, const MagneticCell& cell) {
  check_field(psi, cell);
  if (!(cell.B > 0.0)) throw Error(ErrorKind::InvalidArgument, "GL energy needs B > 0");
  const SparseC M = build_magnetic_laplacian(cell);
  const Eigen::VectorXcd v = as_vec(psi);
  return combine(energy_parts(v, M * v), D, c, cell.B);
}

std::vector<cplx> gl_gradient(const OrderParameterField& psi, double D, const GLCoefficients& c,
                              const MagneticCell& cell) {
  check_field(psi, cell);
  if (!(cell.B > 0.0)) throw Error(ErrorKind::InvalidArgument, "GL energy needs B > 0");
  const SparseC M = build_magnetic_laplacian(cell);
  const Eigen::VectorXcd v = as_vec(psi);
  const Eigen::VectorXcd g = gradient(v, M * v, D, c, cell.B);
  return {g.data(), g.data() + g.size()};
}

struct GLSolver::Factor {
  SparseC P;
  Eigen::SimplicialLDLT<SparseC, Eigen::Lower> ldlt;
};

GLSolver::GLSolver(const MagneticCell& cell, const GLCoefficients& coeffs, const GLOptions& opts)
    : cell_(cell), coeffs_(coeffs), opts_(opts), factor_(std::make_unique<Factor>()) {
  if (!(cell.B > 0.0)) throw Error(ErrorKind::InvalidArgument, "GL minimization needs B > 0");
  check_coefficients(coeffs);
  if (opts.max_iterations < 1 || !(opts.tolerance > 0.0) || opts.history < 1 || opts.polish_steps < 0)
    throw Error(ErrorKind::InvalidArgument, "invalid GL optimizer options");
  M_ = build_magnetic_laplacian(cell);
  const auto spec = landau_levels(cell, 1);
  lambda0_ = spec.eigenvalues.front();
  mode_ = spec.vectors.front();
  // deterministic phase: largest component real and positive
  Eigen::Index imax = 0;
  for (Eigen::Index i = 0; i < mode_.size(); ++i)
    if (std::abs(mode_(i)) > std::abs(mode_(imax)) * (1.0 + 1e-12)) imax = i;
  mode_ *= std::abs(mode_(imax)) / mode_(imax);
  mode_ /= std::sqrt(mean_abs2(mode_));

  const auto n = M_.rows();
  SparseC I(n, n);
  I.setIdentity();
  factor_->P = coeffs.Lambda0 * (M_ + 2.0 * cell.B * I);
  factor_->ldlt.compute(factor_->P);
  if (factor_->ldlt.info() != Eigen::Success) throw Error(ErrorKind::Solver, "preconditioner factorization failed");
}

GLSolver::~GLSolver() = default;

OrderParameterField GLSolver::initial_guess(double D) const {
  const double B = cell_.B;
  KahanSum<double> m4;
  for (Eigen::Index i = 0; i < mode_.size(); ++i) m4 += std::norm(mode_(i)) * std::norm(mode_(i));
  const double mean4 = m4.value() / static_cast<double>(mode_.size());
  const double q = D * B * coeffs_.Lambda2 - coeffs_.Lambda0 * lambda0_;
  const double t = std::sqrt(std::max(0.0, q / (2.0 * coeffs_.Lambda3 * mean4)));
  const double amp = opts_.perturbation * std::max(t, 1e-2 * std::sqrt(B));
  std::mt19937_64 gen(opts_.seed);
  OrderParameterField psi{cell_.N, std::vector<cplx>(cell_.size())};
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double re = uniform_pm1(gen), im = uniform_pm1(gen);
    psi.values[i] = t * mode_(static_cast<Eigen::Index>(i)) + amp * cplx{re, im};
  }
  return psi;
}

GLResult GLSolver::minimize(double D, const OrderParameterField* warm_start) const {
  const double B = cell_.B;
  const double n = static_cast<double>(cell_.size());
  auto energy_of = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& Mv) {
    Mv = M_ * v;
    return combine(energy_parts(v, Mv), D, coeffs_, B);
  };

  OrderParameterField init = initial_guess(D);
  Eigen::VectorXcd psi = as_vec(init);
  Eigen::VectorXcd Mpsi;
  double E = energy_of(psi, Mpsi);
  if (warm_start) {
    check_field(*warm_start, cell_);
    Eigen::VectorXcd w = as_vec(*warm_start);
    Eigen::VectorXcd Mw;
    const double Ew = energy_of(w, Mw);
    if (Ew < E) {
      psi = std::move(w);
      Mpsi = std::move(Mw);
      E = Ew;
    }
  }
  GLResult res;
  res.D = D;
  res.initial_energy = E;

  Eigen::VectorXcd g = gradient(psi, Mpsi, D, coeffs_, B);
  Eigen::VectorXcd z = factor_->ldlt.solve(g);
  auto grad_norm = [&](const Eigen::VectorXcd& gv) { return std::sqrt(mean_abs2(gv)); };
  auto converged = [&](double e, const Eigen::VectorXcd& gv) {
    return grad_norm(gv) <= opts_.tolerance * std::max(1.0, std::abs(e));
  };

  std::deque<double> recent{E};
  double alpha = B * B;
  const double alpha_min = 1e-8 * B * B, alpha_max = 1e4 * B * B;
  int it = 0;
  while (!converged(E, g) && it < opts_.max_iterations) {
    ++it;
    const double ref = *std::max_element(recent.begin(), recent.end());
    const double slope = 2.0 / n * g.dot(z).real();  // -dE/dalpha at alpha = 0
    Eigen::VectorXcd trial, Mtrial;
    double Et = 0.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      trial = psi - alpha * z;
      Et = energy_of(trial, Mtrial);
      if (Et <= ref - 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no further decrease representable
    const Eigen::VectorXcd gt = gradient(trial, Mtrial, D, coeffs_, B);
    const Eigen::VectorXcd s = trial - psi;
    const double sy = s.dot(gt - g).real();
    const double sPs = s.dot(factor_->P * s).real();
    alpha = sy > 0.0 ? std::clamp(sPs / sy, alpha_min, alpha_max) : alpha_max;
    psi = std::move(trial);
    Mpsi = std::move(Mtrial);
    E = Et;
    g = gt;
    z = factor_->ldlt.solve(g);
    recent.push_back(E);
    if (static_cast<int>(recent.size()) > opts_.history) recent.pop_front();
  }

  // fixed-step polish, accepting only decreases
  double step = 0.5 * B * B;
  for (int k = 0; k < opts_.polish_steps; ++k) {
    Eigen::VectorXcd trial = psi - step * z, Mtrial;
    const double Et = energy_of(trial, Mtrial);
    if (Et <= E) {
      psi = std::move(trial);
      Mpsi = std::move(Mtrial);
      E = Et;
      g = gradient(psi, Mpsi, D, coeffs_, B);
      z = factor_->ldlt.solve(g);
    } else {
      step *= 0.5;
    }
  }
  res.iterations = it + opts_.polish_steps;

  if (E > 0.0) {
    // the zero field is admissible with energy 0
    psi.setZero();
    E = 0.0;
    g.setZero();
  }
  res.energy = E;
  res.grad_norm = grad_norm(g);
  res.psi = OrderParameterField{cell_.N, std::vector<cplx>(psi.data(), psi.data() + psi.size())};
  if (!converged(E, g)) {
    std::ostringstream msg;
    msg << "GL minimization at D = " << D << " stopped after " << res.iterations << " iterations with grad_norm "
        << res.grad_norm << " (energy " << E << ")";
    throw Error(ErrorKind::NonConvergence, msg.str());
  }
  return res;
}

GLResult minimize_gl(double D, const GLCoefficients& coeffs, const MagneticCell& cell, const GLOptions& opts) {
  const GLSolver solver(cell, coeffs, opts);
  return solver.minimize(D);
}

std::vector<CurvePoint> egl_curve(const std::vector<double>& D_values, const GLCoefficients& coeffs,
                                  const MagneticCell& cell, const GLOptions& opts) {
  require_ascending(D_values, "D values");
  const GLSolver solver(cell, coeffs, opts);
  std::vector<CurvePoint> out;
  OrderParameterField prev;
  for (std::size_t i = 0; i < D_values.size(); ++i) {
    const auto r = solver.minimize(D_values[i], i == 0 ? nullptr : &prev);
    out.push_back({r.D, r.energy, r.iterations, r.grad_norm});
    prev = r.psi;
  }
  return out;
}

ExponentFit fit_threshold_exponent(const std::vector<CurvePoint>& curve, double Dc, double lo, double hi) {
  KahanSum<double> sx, sy, sxx, sxy;
  int m = 0;
  for (const auto& p : curve) {
    const double ratio = p.D / Dc;
    if (ratio < lo - 1e-12 || ratio > hi + 1e-12 || !(p.energy < 0.0)) continue;
    const double x = std::log(ratio - 1.0), y = std::log(-p.energy);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "exponent fit needs at least two negative energies in range");
  const double den = m * sxx.value() - sx.value() * sx.value();
  if (!(std::abs(den) > 0.0)) throw Error(ErrorKind::DivisionGuard, "degenerate exponent fit");
  ExponentFit f;
  f.exponent = (m * sxy.value() - sx.value() * sy.value()) / den;
  f.prefactor = std::exp((sy.value() - f.exponent * sx.value()) / m);
  f.points = m;
  return f;
}

ScalingReport scaling_check(double D, const GLCoefficients& coeffs, double B1, double B2, int N, const GLOptions& opts) {
  if (!(B1 > 0.0) || !(B2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "scaling check needs B1, B2 > 0");
  const auto c1 = MagneticCell::make(B1, N);
  const auto c2 = MagneticCell::make(B2, N);
  const auto r1 = minimize_gl(D, coeffs, c1, opts);
  const auto r2 = minimize_gl(D, coeffs, c2, opts);
  ScalingReport s;
  s.B1 = B1;
  s.B2 = B2;
  s.E1 = r1.energy;
  s.E2 = r2.energy;
  const double scale = std::max({std::abs(s.E1), std::abs(s.E2), 1e-300});
  s.relative_difference = std::abs(s.E1 - s.E2) / scale;
  OrderParameterField rescaled = r1.psi;
  for (auto& v : rescaled.values) v *= std::sqrt(B2 / B1);
  s.rescaled_energy_difference = std::abs(gl_energy(rescaled, D, coeffs, c2) - s.E1) / scale;
  return s;
}

}  // namespace bcsgl
