// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// usage: acceptance <path-to-bcsgl-cli> <scratch-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bcsgl/gap.hpp"
#include "bcsgl/glcoeff.hpp"
#include "bcsgl/glmin.hpp"
#include "bcsgl/potential.hpp"
#include "bcsgl/symbols.hpp"
#include "bcsgl/tolerances.hpp"

namespace fs = std::filesystem;
using namespace bcsgl;
namespace sy = bcsgl::symbols;

namespace {

// Pinned reference values for V = 2 exp(-r^2), mu = 1, frozen from the
// independent oracles (dense diagonalization at doubled resolution, mpmath).
constexpr double kTcRef = 0.112630618627166;
constexpr double kLambda0Ref = 0.85729378261545;
constexpr double kLambda2Ref = 0.147909259183489;
constexpr double kLambda3Ref = 7.07966417435413;
constexpr double kPinTol = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0.0 || dt <= budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (budget_s > 0.0)
    std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", dt, budget_s);
  else
    std::snprintf(timing, sizeof timing, "%.2f s", dt);
  std::printf("[%s] %2d %s: %s (%s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), timing);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

template <typename F>
sy::MatsubaraSum certified(F&& sum, double target) {
  for (std::int64_t n = 1000; n <= (std::int64_t{1} << 26); n *= 2) {
    auto s = sum(n);
    if (s.tail_bound <= target) return s;
  }
  throw std::runtime_error("tail bound not reached");
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> slurp_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <bcsgl-cli> <scratch-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path work = argv[2];
  fs::remove_all(work);
  fs::create_directories(work);

  criterion(1, "resolvent-norm closed form", 5.0, [] {
    const double mu = 1.0;
    const auto path = sy::speaker_path(10.0, 1.0, mu);
    const std::pair<int, double> pts[] = {{0, 3.0}, {1, 0.5}, {2, 0.2}, {3, 0.7}, {4, 8.0}};
    double worst = 0.0;
    for (double a : {0.0, 1.0, 2.0, 3.0})
      for (const auto& [seg, t] : pts) {
        const cplx z = path.segments[static_cast<std::size_t>(seg)].at(t);
        worst = std::max(worst, rel(sy::g0_weighted_l1_quadrature(a, z, mu), sy::g0_weighted_l1(a, z, mu)));
      }
    return Outcome{worst <= tol::resolvent_l1, "max rel err " + fmt(worst) + " (tol " + fmt(tol::resolvent_l1) + ")"};
  });

  criterion(2, "Matsubara identities", 10.0, [] {
    double worst_c = 0.0, worst_g = 0.0;
    int n_c = 0, n_g = 0;
    for (double beta : {0.5, 1.0, 2.0, 5.0, 20.0})
      for (double z : {-3.0, -0.2, 0.4, 2.5}) {
        const auto s = certified([&](std::int64_t n) { return sy::cosh2_matsubara_sum_accelerated(beta, z, {n}); },
                                 tol::matsubara_tail);
        worst_c = std::max(worst_c, std::abs(s.value + 0.5 * beta * sy::sech2(0.5 * beta * z)) + s.tail_bound);
        ++n_c;
      }
    const double pairs[][2] = {{1.0, 1.0}, {1.0, 1e-5}, {2.0, 0.3}, {0.5, 4.0}, {10.0, 0.05},
                               {3.0, -2.0}, {1.0, 1e-2}, {7.0, 1.5}, {0.2, 0.2}, {4.0, 1e-4}};
    for (const auto& pe : pairs) {
      const double beta = pe[0], E = pe[1];
      const double closed = 0.5 * beta * beta * beta * sy::g1_over_z(beta * E);
      const double scale = std::max(1.0, std::abs(closed));
      const auto s = certified([&](std::int64_t n) { return sy::quartic_matsubara_sum(beta, E, {n}); },
                               tol::matsubara_tail * scale);
      worst_g = std::max(worst_g, (std::abs(s.value - closed) + s.tail_bound) / scale);
      ++n_g;
    }
    const bool ok = worst_c <= tol::matsubara && worst_g <= tol::matsubara && n_c >= 10 && n_g >= 10;
    return Outcome{ok, "cosh^-2: " + std::to_string(n_c) + " pairs, max err " + fmt(worst_c) + "; g1: " +
                           std::to_string(n_g) + " pairs, max err " + fmt(worst_g) + " (tol " + fmt(tol::matsubara) +
                           ", tail included)"};
  });

  criterion(3, "contour representation of K_T", 10.0, [] {
    double worst = 0.0;
    int n = 0;
    for (double x : {-1.9, -0.9, -0.3, 0.0, 0.4, 1.0, 2.5, 5.0, 10.0, 20.0}) {
      worst = std::max(worst, rel(sy::kt_contour_eval(x, 1.0, 1.0, tol::contour_radius), sy::kt_symbol(x, 1.0)));
      ++n;
    }
    return Outcome{worst <= tol::contour,
                   std::to_string(n) + " energies at R = 50, max rel err " + fmt(worst) + " (tol " + fmt(tol::contour) + ")"};
  });

  const auto V = gaussian_potential(2.0, 1.0);
  std::optional<GapSolution> sol;
  criterion(4, "gap equation, reference Gaussian", 60.0, [&] {
    sol = critical_temperature(*V, 1.0, {0.05, 0.2});
    GapOptions fine;
    fine.grid = fine.grid.doubled();
    const auto sol2 = critical_temperature(*V, 1.0, {0.05, 0.2}, fine);
    const double norm_err = std::abs(weighted_norm(sol->alpha_star, 0, NormKind::L2) - 1.0);
    const double refine = rel(sol2.Tc, sol->Tc);
    const double pin = rel(sol->Tc, kTcRef);
    const bool ok = sol->eta_residual <= tol::eta_residual && sol->gap_residual <= tol::gap_residual &&
                    norm_err <= tol::alpha_norm && sol->kappa > 0.0 && refine <= tol::tc_refinement && pin <= kPinTol;
    char b[400];
    std::snprintf(b, sizeof b,
                  "Tc = %.15g, |eta-1| = %.2g, residual = %.2g, |norm-1| = %.2g, kappa = %.4g, doubling %.2g, "
                  "vs pinned %.2g",
                  sol->Tc, sol->eta_residual, sol->gap_residual, norm_err, sol->kappa, refine, pin);
    return Outcome{ok, b};
  });

  std::optional<GLCoefficients> coeffs;
  criterion(5, "coefficient oracles", 60.0, [&] {
    if (!sol) throw std::runtime_error("no gap solution");
    coeffs = compute_coefficients(*sol);
    const auto& p = coeffs->provenance;
    const double pin = std::max({rel(coeffs->Lambda0, kLambda0Ref), rel(coeffs->Lambda2, kLambda2Ref),
                                 rel(coeffs->Lambda3, kLambda3Ref)});
    const bool ok = p.lambda2_fd >= 0.0 && p.lambda2_fd <= tol::lambda2_fd && p.lambda0_hessian >= 0.0 &&
                    p.lambda0_hessian <= tol::lambda0_hessian && p.lambda3_matsubara >= 0.0 &&
                    p.lambda3_matsubara <= tol::lambda3_routes && pin <= kPinTol;
    char b[400];
    std::snprintf(b, sizeof b,
                  "Lambda2 FD %.2g (tol %.0e), Lambda0 Hessian %.2g (tol %.0e), Lambda3 routes %.2g (tol %.0e), "
                  "pins %.2g; Dc = %.12g",
                  p.lambda2_fd, tol::lambda2_fd, p.lambda0_hessian, tol::lambda0_hessian, p.lambda3_matsubara,
                  tol::lambda3_routes, pin, coeffs->Dc);
    return Outcome{ok, b};
  });

  criterion(6, "lowest Landau eigenvalue", 120.0, [] {
    double err[3];
    const int Ns[] = {32, 64, 128};
    int degeneracy = 0;
    for (int i = 0; i < 3; ++i) {
      const auto s = landau_levels(MagneticCell::make(1.0, Ns[i]), 2);
      err[i] = std::abs(s.eigenvalues[0] - 2.0);
      degeneracy = s.lowest_degeneracy;
    }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    const bool ok = err[2] <= tol::landau_lowest && std::abs(o1 - 2.0) <= tol::landau_order &&
                    std::abs(o2 - 2.0) <= tol::landau_order;
    char b[200];
    std::snprintf(b, sizeof b, "|lambda0 - 2| = %.3g at N = 128 (tol %.0e), observed orders %.3f, %.3f, degeneracy %d",
                  err[2], tol::landau_lowest, o1, o2, degeneracy);
    return Outcome{ok, b};
  });

  criterion(7, "GL threshold", 300.0, [&] {
    if (!coeffs) throw std::runtime_error("no coefficients");
    const auto cell = MagneticCell::make(1.0, 64);
    const GLSolver solver(cell, *coeffs);
    double worst_zero = 0.0;
    for (double ratio : {0.5, 0.9, 1.0})
      worst_zero = std::max(worst_zero, std::abs(solver.minimize(ratio * coeffs->Dc).energy));
    const double above = solver.minimize(1.1 * coeffs->Dc).energy;
    std::vector<double> D;
    for (int i = 0; i <= 10; ++i) D.push_back(coeffs->Dc * (1.01 + 0.009 * i));
    const auto fit = fit_threshold_exponent(egl_curve(D, *coeffs, cell), coeffs->Dc);
    const bool ok = worst_zero <= tol::gl_zero && above < tol::gl_negative &&
                    std::abs(fit.exponent - 2.0) <= tol::gl_exponent;
    char b[300];
    std::snprintf(b, sizeof b, "max |E| for D <= Dc: %.2g, E(1.1 Dc) = %.4g, fitted exponent %.4f (N = 64)",
                  worst_zero, above, fit.exponent);
    return Outcome{ok, b};
  });

  criterion(8, "scaling invariance", 300.0, [&] {
    if (!coeffs) throw std::runtime_error("no coefficients");
    const auto s = scaling_check(1.2 * coeffs->Dc, *coeffs, 1.0, 4.0, 64);
    char b[200];
    std::snprintf(b, sizeof b, "E(B=1) = %.10g, E(B=4) = %.10g, rel diff %.2g (tol %.0e)", s.E1, s.E2,
                  s.relative_difference, tol::gl_scaling);
    return Outcome{s.relative_difference <= tol::gl_scaling, b};
  });

  // CLI runs shared by criteria 9 and 10
  {
    std::ofstream cfg(work / "run.cfg");
    cfg << "[model]\npotential = gaussian:2,1\nmu = 1\n\n[gap]\nbracket = 0.05,0.2\n\n"
        << "[glmin]\nd_range = 0.9,1.3,5\ncell_n = 64\n\n[tcshift]\nb_range = 0,0.05,6\n";
  }
  const char* commands[] = {"gap", "coeffs", "tcshift", "glmin", "verify"};
  std::map<std::string, int> exit_codes;
  auto run_all = [&](const std::string& tag) {
    for (const char* c : commands) {
      const fs::path out = work / tag / c;
      const std::string cmd = "\"" + cli + "\" " + c + " --config \"" + (work / "run.cfg").string() + "\" --out \"" +
                              out.string() + "\" > \"" + (work / (tag + "_" + c + ".log")).string() + "\" 2>&1";
      exit_codes[tag + "/" + c] = run(cmd);
    }
  };

  criterion(9, "CLI determinism", 0.0, [&] {
    run_all("a");
    run_all("b");
    int differing = 0, compared = 0;
    std::string first_diff;
    for (const char* c : commands) {
      const auto fa = slurp_dir(work / "a" / c);
      const auto fb = slurp_dir(work / "b" / c);
      if (fa.size() != fb.size() && first_diff.empty()) first_diff = std::string(c) + ": file sets differ";
      for (const auto& [name, content] : fa) {
        ++compared;
        const auto it = fb.find(name);
        if (it == fb.end() || it->second != content) {
          ++differing;
          if (first_diff.empty()) first_diff = std::string(c) + "/" + name;
        }
      }
      if (exit_codes["a/" + std::string(c)] != exit_codes["b/" + std::string(c)] && first_diff.empty())
        first_diff = std::string(c) + ": exit codes differ";
    }
    const bool ok = differing == 0 && first_diff.empty() && compared > 0;
    return Outcome{ok, std::to_string(compared) + " files over 5 commands, " + std::to_string(differing) + " differ" +
                           (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
  });

  criterion(10, "verification gate", 0.0, [&] {
    const int code = exit_codes.count("a/verify") ? exit_codes["a/verify"] : -1;
    std::string summary = "no report";
    std::ifstream in(work / "a" / "verify" / "verify.jsonl");
    for (std::string line; std::getline(in, line);)
      if (line.rfind("{\"summary\"", 0) == 0) summary = line;
    return Outcome{code == 0, "bcsgl verify exit code " + std::to_string(code) + ", " + summary};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
