#pragma once

#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "bcsgl/glcoeff.hpp"

namespace bcsgl {

using cplx = std::complex<double>;

/// Square magnetic unit cell of side sqrt(2 pi / B) carrying two flux quanta of
/// the charge-2 field (effective field 2B), discretized with N x N sites.
/// Landau gauge a = (0, 2B (x - x0)); hops carry exp(i int a . dl). Sites are
/// indexed k * N + j with x = j h, y = k h.
struct MagneticCell {
  double B = 0.0;
  double side = 0.0;
  double h = 0.0;
  double x0 = 0.0;
  int N = 0;
  std::vector<cplx> ux;  // link (j, k) -> (j+1, k)
  std::vector<cplx> uy;  // link (j, k) -> (j, k+1)

  static MagneticCell make(double B, int N, double x0 = 0.0);
  /// All phases 1 on a cell of the given side (B = 0).
  static MagneticCell zero_field(double side, int N);

  std::size_t size() const { return static_cast<std::size_t>(N) * static_cast<std::size_t>(N); }
  std::size_t index(int j, int k) const { return static_cast<std::size_t>(k) * N + static_cast<std::size_t>(j); }
  /// Counter-clockwise product of link phases around plaquette (j, k).
  cplx plaquette(int j, int k) const;
  /// Product of all plaquettes.
  cplx total_winding() const;
};

struct OrderParameterField {
  int N = 0;
  std::vector<cplx> values;
};

using SparseC = Eigen::SparseMatrix<cplx>;

/// (1/h^2) sum over the four neighbours of [psi(s) - U_{s->n} psi(n)].
SparseC build_magnetic_laplacian(const MagneticCell& cell);

/// (T psi)(x, y) = exp(i 2B lx y) psi(x + lx, y + ly) with lx = sx h, ly = sy h,
/// using the gauge-periodic extension of psi.
OrderParameterField magnetic_translate(const MagneticCell& cell, const OrderParameterField& psi, int sx, int sy);

struct LandauSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::vector<Eigen::VectorXcd> vectors;
  int lowest_degeneracy = 0;
  int iterations = 0;
};

/// Lowest `count` eigenpairs by block inverse iteration with Rayleigh-Ritz.
LandauSpectrum landau_levels(const MagneticCell& cell, int count = 4, double tolerance = 1e-11,
                             std::uint64_t seed = 7);
double lowest_landau_eigenvalue(const MagneticCell& cell);

/// (1/B^2) [Lambda0 mean(conj(psi) M psi) - D B Lambda2 mean|psi|^2 + Lambda3 mean|psi|^4].
double gl_energy(const OrderParameterField& psi, double D, const GLCoefficients& c, const MagneticCell& cell);

/// g = (1/B^2) [Lambda0 M psi - D B Lambda2 psi + 2 Lambda3 |psi|^2 psi]; the
/// directional derivative of gl_energy along v is (2/N^2) Re sum conj(g) v.
std::vector<cplx> gl_gradient(const OrderParameterField& psi, double D, const GLCoefficients& c,
                              const MagneticCell& cell);

struct GLOptions {
  int max_iterations = 20000;
  double tolerance = 1e-9;  // grad_norm <= tolerance * max(1, |energy|)
  int polish_steps = 50;
  int history = 10;  // nonmonotone line-search memory
  double perturbation = 1e-3;
  std::uint64_t seed = 20240601;
};

struct GLResult {
  double D = 0.0;
  double energy = 0.0;
  double initial_energy = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  OrderParameterField psi;
};

/// Reusable state for a cell: Laplacian, lowest Landau mode and the
/// factorized preconditioner Lambda0 (M + 2B).
class GLSolver {
 public:
  GLSolver(const MagneticCell& cell, const GLCoefficients& coeffs, const GLOptions& opts = {});
  ~GLSolver();
  GLSolver(const GLSolver&) = delete;
  GLSolver& operator=(const GLSolver&) = delete;

  GLResult minimize(double D, const OrderParameterField* warm_start = nullptr) const;
  /// Lowest Landau mode scaled to the one-mode optimum at D, plus the seeded perturbation.
  OrderParameterField initial_guess(double D) const;

  const MagneticCell& cell() const { return cell_; }
  double lowest_eigenvalue() const { return lambda0_; }
  const Eigen::VectorXcd& lowest_mode() const { return mode_; }

 private:
  struct Factor;
  MagneticCell cell_;
  GLCoefficients coeffs_;
  GLOptions opts_;
  SparseC M_;
  double lambda0_ = 0.0;
  Eigen::VectorXcd mode_;  // mean |mode|^2 = 1
  std::unique_ptr<Factor> factor_;
};

GLResult minimize_gl(double D, const GLCoefficients& coeffs, const MagneticCell& cell, const GLOptions& opts = {});

struct CurvePoint {
  double D = 0.0;
  double energy = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
};

/// E^GL over ascending D values, each run warm-started from the previous minimizer
/// when that is lower than the one-mode start.
std::vector<CurvePoint> egl_curve(const std::vector<double>& D_values, const GLCoefficients& coeffs,
                                  const MagneticCell& cell, const GLOptions& opts = {});

struct ExponentFit {
  double exponent = 0.0;
  double prefactor = 0.0;  // E ~ -prefactor (D/Dc - 1)^exponent
  int points = 0;
};

/// Least-squares fit of log(-E) against log(D/Dc - 1) over D/Dc in [lo, hi].
ExponentFit fit_threshold_exponent(const std::vector<CurvePoint>& curve, double Dc, double lo = 1.01,
                                   double hi = 1.1);

struct ScalingReport {
  double B1 = 0.0, B2 = 0.0;
  double E1 = 0.0, E2 = 0.0;
  double relative_difference = 0.0;
  double rescaled_energy_difference = 0.0;  // gl_energy of the rescaled B1 minimizer on the B2 cell vs E1
};

/// Minimizes at fields B1 and B2 on cells with the same N and compares.
ScalingReport scaling_check(double D, const GLCoefficients& coeffs, double B1, double B2, int N,
                            const GLOptions& opts = {});

}  // namespace bcsgl
