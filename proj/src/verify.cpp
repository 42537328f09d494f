#include "bcsgl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>

#include "bcsgl/error.hpp"
#include "bcsgl/glcoeff.hpp"
#include "bcsgl/glmin.hpp"
#include "bcsgl/io.hpp"
#include "bcsgl/symbols.hpp"
#include "bcsgl/tolerances.hpp"

namespace bcsgl {

namespace sy = symbols;

VerifySummary VerificationReport::summary() const {
  VerifySummary s;
  for (const auto& e : entries) {
    ++s.total;
    if (e.pass)
      ++s.passed;
    else
      ++s.failed;
    if (e.tolerance > 0.0) {
      const double ratio = std::isfinite(e.error) ? std::abs(e.error) / e.tolerance : std::numeric_limits<double>::infinity();
      s.max_error_ratio = std::max(s.max_error_ratio, ratio);
    }
  }
  return s;
}

bool VerificationReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return e.pass; });
}

std::string VerificationReport::to_jsonl() const {
  auto num = [](double v) -> ojson {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  };
  std::string out;
  for (const auto& e : entries) {
    ojson j;
    j["group"] = e.group;
    j["name"] = e.name;
    j["anchor"] = e.anchor;
    ojson p = ojson::object();
    for (const auto& [k, v] : e.params) p[k] = num(v);
    j["params"] = p;
    j["error"] = num(e.error);
    j["tolerance"] = e.tolerance;
    j["pass"] = e.pass;
    if (!e.note.empty()) j["note"] = e.note;
    out += j.dump() + '\n';
  }
  const auto s = summary();
  ojson j;
  j["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed},
                  {"max_error_ratio", num(s.max_error_ratio)}};
  out += j.dump() + '\n';
  return out;
}

const std::vector<std::string>& identity_groups() {
  static const std::vector<std::string> g{"symbols", "gap", "coefficients", "minimizer"};
  return g;
}

namespace {

using Params = std::vector<std::pair<std::string, double>>;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Smallest doubling of `start` whose tail bound is below `target`.
template <typename F>
sy::MatsubaraSum certified(F&& sum, double target) {
  for (std::int64_t n = 1000; n <= (std::int64_t{1} << 26); n *= 2) {
    auto s = sum(n);
    if (s.tail_bound <= target) return s;
  }
  throw Error(ErrorKind::Truncation, "Matsubara tail bound not reached");
}

// Lazily computed shared state; a failure is remembered and rethrown for
// every dependent check.
template <typename T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> f) : f_(std::move(f)) {}
  const T& get() {
    if (!error_.empty()) throw Error(kind_, error_);
    if (!value_) {
      try {
        value_.emplace(f_());
      } catch (const Error& e) {
        kind_ = e.kind();
        error_ = e.what();
        throw;
      }
    }
    return *value_;
  }

 private:
  std::function<T()> f_;
  std::optional<T> value_;
  ErrorKind kind_ = ErrorKind::Solver;
  std::string error_;
};

class Suite {
 public:
  explicit Suite(const VerifyConfig& cfg)
      : cfg_(cfg),
        V_(parse_potential(cfg.potential)),
        sol_([this] {
          GapOptions o;
          o.grid = cfg_.grid;
          return critical_temperature(*V_, cfg_.mu, cfg_.bracket, o);
        }),
        sol2_([this] {
          GapOptions o;
          o.grid = cfg_.grid.doubled();
          return critical_temperature(*V_, cfg_.mu, cfg_.bracket, o);
        }),
        coeffs_([this] { return compute_coefficients(sol_.get()); }) {}

  VerificationReport run() {
    for (const auto& g : cfg_.groups) {
      group_ = g;
      if (g == "symbols")
        symbols_group();
      else if (g == "gap")
        gap_group();
      else if (g == "coefficients")
        coefficient_group();
      else if (g == "minimizer")
        minimizer_group();
    }
    return std::move(report_);
  }

 private:
  void check(const std::string& name, const std::string& anchor, Params params, double tolerance,
             const std::function<double()>& f) {
    VerifyEntry e;
    e.group = group_;
    e.name = name;
    e.anchor = anchor;
    e.params = std::move(params);
    e.tolerance = tolerance;
    try {
      e.error = f();
    } catch (const std::exception& ex) {
      e.error = std::numeric_limits<double>::infinity();
      e.note = ex.what();
    }
    e.pass = e.error <= e.tolerance;
    report_.entries.push_back(std::move(e));
  }

  void symbols_group() {
    const double mu = 1.0;
    const auto path = sy::speaker_path(10.0, 1.0, mu);
    const std::pair<int, double> pts[] = {{0, 3.0}, {1, 0.5}, {2, 0.2}, {3, 0.7}, {4, 8.0}};
    for (double a : {0.0, 1.0, 2.0, 3.0})
      for (const auto& [seg, t] : pts) {
        const cplx z = path.segments[static_cast<std::size_t>(seg)].at(t);
        check("resolvent_weighted_l1", "weighted L1 norm of the free resolvent kernel",
              {{"a", a}, {"re_z", z.real()}, {"im_z", z.imag()}, {"mu", mu}}, tol::resolvent_l1,
              [&] { return rel(sy::g0_weighted_l1_quadrature(a, z, mu), sy::g0_weighted_l1(a, z, mu)); });
      }

    for (double beta : {0.5, 1.0, 2.0, 5.0, 20.0})
      for (double z : {-3.0, -0.2, 0.4, 2.5})
        check("cosh2_matsubara", "Matsubara expansion of the derivative of tanh", {{"beta", beta}, {"z", z}},
              tol::matsubara, [&] {
                const auto s = certified([&](std::int64_t n) { return sy::cosh2_matsubara_sum_accelerated(beta, z, {n}); },
                                         tol::matsubara_tail);
                const double exact = -0.5 * beta * sy::sech2(0.5 * beta * z);
                return std::abs(s.value - exact) + s.tail_bound;
              });

    const double pairs[][2] = {{1.0, 1.0}, {1.0, 1e-5}, {2.0, 0.3}, {0.5, 4.0}, {10.0, 0.05},
                               {3.0, -2.0}, {1.0, 1e-2}, {7.0, 1.5}, {0.2, 0.2}, {4.0, 1e-4}};
    for (const auto& pe : pairs) {
      const double beta = pe[0], E = pe[1];
      check("g1_matsubara", "Matsubara sum of the quartic resolvent product against g1", {{"beta", beta}, {"E", E}},
            tol::matsubara, [&] {
              const double closed = 0.5 * beta * beta * beta * cfg_.g1_scale * sy::g1_over_z(beta * E);
              const double scale = std::max(1.0, std::abs(closed));
              const auto s = certified([&](std::int64_t n) { return sy::quartic_matsubara_sum(beta, E, {n}); },
                                       tol::matsubara_tail * scale);
              return (std::abs(s.value - closed) + s.tail_bound) / scale;
            });
    }

    for (double x : {-1.9, -0.9, -0.3, 0.0, 0.4, 1.0, 2.5, 5.0, 10.0, 20.0})
      check("kt_contour", "contour integral representation of K_T",
            {{"x", x}, {"T", 1.0}, {"mu", mu}, {"R", tol::contour_radius}}, tol::contour, [&] {
              return rel(sy::kt_contour_eval(x, 1.0, mu, tol::contour_radius), sy::kt_symbol(x, 1.0));
            });

    for (double p : {0.3, 0.7, 1.2, 2.0})
      check("lt_diagonal", "L_T(p, p) K_T(p^2 - mu) = 1", {{"p", p}, {"T", 0.2}, {"mu", mu}}, tol::lt_diagonal,
            [&] { return std::abs(sy::lt_symbol(p, p, 0.2, mu) * sy::kt_symbol(p * p - mu, 0.2) - 1.0); });

    for (double T : {0.1, 1.0})
      check("kt_lower_bound", "K_T(x) >= max(2T, |x|)", {{"T", T}}, tol::kt_bound, [&] {
        double worst = 0.0;
        for (int i = -40; i <= 40; ++i) {
          const double x = 0.5 * i;
          const double k = sy::kt_symbol(x, T);
          worst = std::max(worst, (std::max(2.0 * T, std::abs(x)) - k) / k);
        }
        return std::max(worst, 0.0);
      });
  }

  void gap_group() {
    const Params base{{"mu", cfg_.mu}, {"T_lo", cfg_.bracket.first}, {"T_hi", cfg_.bracket.second}};
    check("eta_residual", "largest Birman-Schwinger eigenvalue equals 1 at Tc", base, tol::eta_residual,
          [&] { return sol_.get().eta_residual; });
    check("gap_residual", "K_Tc alpha* = V alpha*", base, tol::gap_residual, [&] { return sol_.get().gap_residual; });
    check("alpha_norm", "||alpha*||_2 = 1", base, tol::alpha_norm,
          [&] { return std::abs(weighted_norm(sol_.get().alpha_star, 0, NormKind::L2) - 1.0); });
    check("ground_energy", "0 is the lowest eigenvalue of K_Tc - V", base, tol::ground_energy,
          [&] { return std::abs(sol_.get().e0); });
    check("spectral_gap", "kappa > 0 above the ground state", base, 0.0,
          [&] { return std::max(0.0, GapOptions{}.kappa_tolerance - sol_.get().kappa); });
    check("bs_positive", "Birman-Schwinger operator is positive semidefinite", base, tol::psd, [&] {
      const auto rg = make_radial_grid(*V_, cfg_.grid);
      const BirmanSchwingerOperator op(sample(*V_, rg), make_momentum_grid(*V_, cfg_.mu, cfg_.bracket.first, cfg_.grid),
                                       cfg_.mu);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix(sol_.get().Tc), Eigen::EigenvaluesOnly);
      return std::max(0.0, -es.eigenvalues().minCoeff());
    });
    check("eta_monotone", "eta(T) strictly decreasing", base, 0.0, [&] {
      const auto rg = make_radial_grid(*V_, cfg_.grid);
      const BirmanSchwingerOperator op(sample(*V_, rg), make_momentum_grid(*V_, cfg_.mu, cfg_.bracket.first, cfg_.grid),
                                       cfg_.mu);
      const double lo = cfg_.bracket.first, hi = cfg_.bracket.second;
      double prev = op.top(lo).first, worst = -INFINITY;
      for (int i = 1; i <= 12; ++i) {
        const double eta = op.top(lo * std::pow(hi / lo, i / 12.0)).first;
        worst = std::max(worst, eta - prev);
        prev = eta;
      }
      return worst < 0.0 ? 0.0 : std::max(worst, 1e-300);
    });
    check("moment_tails", "finite decay moments of alpha*, nu = 0..3", base, tol::moment_tail, [&] {
      double worst = 0.0;
      for (const auto& m : moment_check(sol_.get().alpha_star, 3, INFINITY)) worst = std::max(worst, m.tail_share);
      return worst;
    });
    if (cfg_.refinement)
      check("tc_refinement", "Tc stable under grid doubling", base, tol::tc_refinement,
            [&] { return rel(sol2_.get().Tc, sol_.get().Tc); });
  }

  void coefficient_group() {
    const Params base{{"mu", cfg_.mu}};
    check("lambda2_finite_difference", "Lambda2 as the T-derivative of the K_T^-1 integral", base, tol::lambda2_fd,
          [&] { return coeffs_.get().provenance.lambda2_fd; });
    check("lambda0_hessian", "Lambda0 from the angular-averaged q-Hessian of L_Tc", base, tol::lambda0_hessian,
          [&] { return coeffs_.get().provenance.lambda0_hessian; });
    check("lambda0_tanh_form", "Lambda0 through derivatives of tanh", base, tol::lambda0_cross,
          [&] { return coeffs_.get().provenance.lambda0_cross; });
    check("lambda3_matsubara", "Lambda3 from the quartic Matsubara sum", base, tol::lambda3_routes,
          [&] { return coeffs_.get().provenance.lambda3_matsubara; });
    check("positivity", "Lambda0, Lambda2, Lambda3 > 0", base, 0.0, [&] {
      const auto& c = coeffs_.get();
      return std::min({c.Lambda0, c.Lambda2, c.Lambda3}) > 0.0 ? 0.0 : 1.0;
    });
    check("dc_identity", "Dc = 2 Lambda0 / Lambda2", base, 0.0, [&] {
      const auto& c = coeffs_.get();
      return std::abs(c.Dc - 2.0 * c.Lambda0 / c.Lambda2);
    });
    if (cfg_.refinement)
      check("coefficient_refinement", "coefficients stable under grid doubling", base, tol::coeff_refinement, [&] {
        const auto& c = coeffs_.get();
        const auto c2 = compute_coefficients(sol2_.get(), {false});
        return std::max({rel(c2.Lambda0, c.Lambda0), rel(c2.Lambda2, c.Lambda2), rel(c2.Lambda3, c.Lambda3)});
      });
  }

  void minimizer_group() {
    const double B = cfg_.field;
    const int nl = cfg_.landau_n;
    std::optional<LandauSpectrum> fine;
    check("landau_lowest", "lowest eigenvalue of the charge-2 magnetic Laplacian equals 2B", {{"B", B}, {"N", nl}},
          tol::landau_lowest, [&] {
            fine = landau_levels(MagneticCell::make(B, nl), 4);
            return std::abs(fine->eigenvalues[0] / B - 2.0);
          });
    check("landau_degeneracy", "lowest level is twofold on the cell", {{"B", B}, {"N", nl}}, 0.0, [&] {
      if (!fine) throw Error(ErrorKind::Solver, "no spectrum");
      return std::abs(fine->lowest_degeneracy - 2.0);
    });
    check("landau_second", "next distinct level equals 6B", {{"B", B}, {"N", nl}}, tol::landau_lowest, [&] {
      if (!fine) throw Error(ErrorKind::Solver, "no spectrum");
      return std::abs(fine->eigenvalues[2] / B - 6.0);
    });
    check("landau_order", "O(h^2) convergence of the lowest level", {{"B", B}, {"N", nl}}, tol::landau_order, [&] {
      if (!fine) throw Error(ErrorKind::Solver, "no spectrum");
      const double e4 = std::abs(lowest_landau_eigenvalue(MagneticCell::make(B, nl / 4)) / B - 2.0);
      const double e2 = std::abs(lowest_landau_eigenvalue(MagneticCell::make(B, nl / 2)) / B - 2.0);
      const double e1 = std::abs(fine->eigenvalues[0] / B - 2.0);
      return std::max(std::abs(std::log2(e4 / e2) - 2.0), std::abs(std::log2(e2 / e1) - 2.0));
    });
    check("gauge_origin", "spectrum independent of the gauge origin", {{"B", B}, {"N", 32}, {"x0", 0.37}},
          tol::gauge_shift, [&] {
            return std::abs(lowest_landau_eigenvalue(MagneticCell::make(B, 32, 0.37)) -
                            lowest_landau_eigenvalue(MagneticCell::make(B, 32)));
          });

    const auto small = MagneticCell::make(B, 16, 0.2);
    std::mt19937_64 gen(cfg_.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_field = [&] {
      OrderParameterField f{small.N, std::vector<cplx>(small.size())};
      for (auto& v : f.values) v = {u(gen), u(gen)};
      return f;
    };
    check("hermitian", "magnetic Laplacian is Hermitian", {{"B", B}, {"N", small.N}}, tol::hermitian, [&] {
      const SparseC M = build_magnetic_laplacian(small);
      const SparseC Mh = M.adjoint();
      return SparseC(M - Mh).coeffs().abs().maxCoeff();
    });
    check("translation_commutator", "magnetic translations commute with the Laplacian", {{"B", B}, {"N", small.N}},
          tol::translation, [&] {
            const SparseC M = build_magnetic_laplacian(small);
            const auto psi = random_field();
            auto apply_op = [&](const OrderParameterField& f) {
              Eigen::Map<const Eigen::VectorXcd> v(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
              const Eigen::VectorXcd w = M * v;
              return OrderParameterField{f.N, std::vector<cplx>(w.data(), w.data() + w.size())};
            };
            double worst = 0.0;
            const int h = small.N / 2;
            for (const auto& [sx, sy] : {std::pair{h, 0}, std::pair{0, h}, std::pair{h, h}}) {
              const auto a = apply_op(magnetic_translate(small, psi, sx, sy));
              const auto b = magnetic_translate(small, apply_op(psi), sx, sy);
              for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
            }
            return worst;
          });
    check("gradient_fd", "analytic gradient against central differences, 10 directions", {{"B", B}, {"N", small.N}},
          tol::gradient_fd, [&] {
            const auto& c = coeffs_.get();
            const double D = 1.3 * c.Dc;
            auto psi = random_field();
            for (auto& v : psi.values) v *= 0.3;
            const auto g = gl_gradient(psi, D, c, small);
            const double n2 = static_cast<double>(small.size());
            double worst = 0.0;
            for (int dir = 0; dir < 10; ++dir) {
              const auto v = random_field();
              double analytic = 0.0;
              for (std::size_t i = 0; i < g.size(); ++i) analytic += 2.0 / n2 * (std::conj(g[i]) * v.values[i]).real();
              const double h = 1e-5;
              auto plus = psi, minus = psi;
              for (std::size_t i = 0; i < g.size(); ++i) {
                plus.values[i] += h * v.values[i];
                minus.values[i] -= h * v.values[i];
              }
              const double fd = (gl_energy(plus, D, c, small) - gl_energy(minus, D, c, small)) / (2.0 * h);
              worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
            }
            return worst;
          });
    check("phase_invariance", "energy invariant under a global phase", {{"B", B}, {"N", small.N}},
          tol::phase_invariance, [&] {
            const auto& c = coeffs_.get();
            const auto psi = random_field();
            auto rot = psi;
            for (auto& v : rot.values) v *= std::polar(1.0, 0.731);
            const double e = gl_energy(psi, 1.2 * c.Dc, c, small);
            return std::abs(gl_energy(rot, 1.2 * c.Dc, c, small) - e) / std::max(1.0, std::abs(e));
          });

    GLOptions opts;
    opts.seed = cfg_.seed;
    std::unique_ptr<GLSolver> solver;
    auto get_solver = [&]() -> const GLSolver& {
      if (!solver) solver = std::make_unique<GLSolver>(MagneticCell::make(B, cfg_.cell_n), coeffs_.get(), opts);
      return *solver;
    };
    for (double ratio : {0.5, 0.9, 1.0})
      check("gl_zero_below_threshold", "E_GL(D) = 0 for D <= Dc", {{"D_over_Dc", ratio}, {"B", B}, {"N", cfg_.cell_n}},
            tol::gl_zero, [&] { return std::abs(get_solver().minimize(ratio * coeffs_.get().Dc).energy); });
    std::optional<GLResult> above;
    check("gl_negative_above_threshold", "E_GL(D) < 0 for D > Dc", {{"D_over_Dc", 1.1}, {"B", B}, {"N", cfg_.cell_n}},
          tol::gl_negative, [&] {
            above = get_solver().minimize(1.1 * coeffs_.get().Dc);
            return above->energy;
          });
    check("gl_descent", "minimizer energy does not exceed the starting energy", {{"D_over_Dc", 1.1}}, 0.0, [&] {
      if (!above) throw Error(ErrorKind::NonConvergence, "no minimizer");
      return std::max(0.0, above->energy - above->initial_energy);
    });

    std::vector<CurvePoint> curve;
    check("egl_monotone", "E_GL nonincreasing in D", {{"B", B}, {"N", cfg_.cell_n}}, 0.0, [&] {
      const double Dc = coeffs_.get().Dc;
      std::vector<double> D;
      for (int i = 0; i <= 10; ++i) D.push_back(Dc * (1.01 + 0.009 * i));
      curve = egl_curve(D, coeffs_.get(), get_solver().cell(), opts);
      double worst = 0.0;
      for (std::size_t i = 1; i < curve.size(); ++i) worst = std::max(worst, curve[i].energy - curve[i - 1].energy);
      return worst;
    });
    check("threshold_exponent", "E_GL ~ -(D - Dc)^2 near threshold", {{"lo", 1.01}, {"hi", 1.1}}, tol::gl_exponent,
          [&] { return std::abs(fit_threshold_exponent(curve, coeffs_.get().Dc).exponent - 2.0); });
    std::optional<ScalingReport> sc;
    check("scaling", "E_GL independent of B", {{"B1", B}, {"B2", 4.0 * B}, {"N", cfg_.cell_n}, {"D_over_Dc", 1.2}},
          tol::gl_scaling, [&] {
            sc = scaling_check(1.2 * coeffs_.get().Dc, coeffs_.get(), B, 4.0 * B, cfg_.cell_n, opts);
            return sc->relative_difference;
          });
    check("scaling_rescaled_field", "rescaled minimizer has the same energy at the second field",
          {{"B1", B}, {"B2", 4.0 * B}}, tol::gl_rescaled, [&] {
            if (!sc) throw Error(ErrorKind::NonConvergence, "no scaling report");
            return sc->rescaled_energy_difference;
          });
  }

  const VerifyConfig& cfg_;
  std::shared_ptr<const Potential> V_;
  Lazy<GapSolution> sol_;
  Lazy<GapSolution> sol2_;
  Lazy<GLCoefficients> coeffs_;
  std::string group_;
  VerificationReport report_;
};

}  // namespace

VerificationReport run_identity_suite(const VerifyConfig& cfg) {
  for (const auto& g : cfg.groups)
    if (std::find(identity_groups().begin(), identity_groups().end(), g) == identity_groups().end())
      throw Error(ErrorKind::InvalidArgument, "unknown verification group '" + g + "'");
  if (cfg.groups.empty()) return {};
  if (cfg.cell_n < 16 || cfg.landau_n < 16 || cfg.landau_n % 8 != 0)
    throw Error(ErrorKind::InvalidArgument, "cell sizes must be >= 16 and landau_n a multiple of 8");
  Suite suite(cfg);
  return suite.run();
}

}  // namespace bcsgl
