// bcsgl command-line driver: gap, coeffs, tcshift, glmin, verify.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcsgl/error.hpp"
#include "bcsgl/gap.hpp"
#include "bcsgl/glcoeff.hpp"
#include "bcsgl/glmin.hpp"
#include "bcsgl/io.hpp"
#include "bcsgl/verify.hpp"

namespace fs = std::filesystem;
using namespace bcsgl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Range {
  double lo = 0.0, hi = 0.0;
  int steps = 1;
  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < steps; ++i) v.push_back(steps == 1 ? lo : (lo * (steps - 1 - i) + hi * i) / (steps - 1));
    return v;
  }
};

struct RunConfig {
  std::string potential = "gaussian:2,1";
  double mu = 1.0;
  std::pair<double, double> bracket{0.05, 0.2};
  GridConfig grid;
  std::string out = "bcsgl-out";
  Range d_range{0.5, 1.5, 11};  // in units of Dc
  Range b_range{0.0, 0.05, 6};
  int cell_n = 64;
  double field = 1.0;
  std::uint64_t seed = 20240601;
  std::vector<std::string> groups = identity_groups();
  int landau_n = 128;
  bool refinement = true;
  double g1_scale = 1.0;
  bool json = false;
};

// ---- parsing ---------------------------------------------------------------

double parse_real(const std::string& field, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(field + ": expected a number, got '" + s + "'");
  }
}

int parse_int(const std::string& field, const std::string& s) {
  const double v = parse_real(field, s);
  if (v != static_cast<int>(v)) throw UsageError(field + ": expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& field, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw UsageError(field + ": expected true or false, got '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

std::pair<double, double> parse_pair(const std::string& field, const std::string& s) {
  const auto p = split(s, ',');
  if (p.size() != 2) throw UsageError(field + ": expected LO,HI, got '" + s + "'");
  return {parse_real(field, p[0]), parse_real(field, p[1])};
}

Range parse_range(const std::string& field, const std::string& s) {
  const auto p = split(s, ',');
  if (p.size() != 3) throw UsageError(field + ": expected LO,HI,STEPS, got '" + s + "'");
  return {parse_real(field, p[0]), parse_real(field, p[1]), parse_int(field, p[2])};
}

// Applies one `key = value` setting. Keys are accepted with or without their section.
void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  static const std::map<std::string, std::string> section_of{
      {"potential", "model"}, {"mu", "model"},
      {"bracket", "gap"},
      {"r_order", "grid"}, {"r_panel", "grid"}, {"r_max", "grid"}, {"p_order", "grid"}, {"p_panel", "grid"},
      {"p_max", "grid"}, {"fermi_grading", "grid"}, {"refine", "grid"}, {"out_decay_lengths", "grid"},
      {"out_panel", "grid"},
      {"d_range", "glmin"}, {"cell_n", "glmin"}, {"field", "glmin"}, {"seed", "glmin"},
      {"b_range", "tcshift"},
      {"groups", "verify"}, {"landau_n", "verify"}, {"refinement", "verify"}, {"g1_scale", "verify"},
      {"out", "output"}, {"json", "output"}};
  std::string name = key;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    const std::string section = key.substr(0, dot);
    name = key.substr(dot + 1);
    const auto it = section_of.find(name);
    if (it == section_of.end() || it->second != section) throw UsageError("unknown config field '" + key + "'");
  } else if (!section_of.count(name)) {
    throw UsageError("unknown config field '" + key + "'");
  }
  const std::string& f = key;
  if (name == "potential") c.potential = value;
  else if (name == "mu") c.mu = parse_real(f, value);
  else if (name == "bracket") c.bracket = parse_pair(f, value);
  else if (name == "r_order") c.grid.r_order = parse_int(f, value);
  else if (name == "r_panel") c.grid.r_panel = parse_real(f, value);
  else if (name == "r_max") c.grid.r_max = parse_real(f, value);
  else if (name == "p_order") c.grid.p_order = parse_int(f, value);
  else if (name == "p_panel") c.grid.p_panel = parse_real(f, value);
  else if (name == "p_max") c.grid.p_max = parse_real(f, value);
  else if (name == "fermi_grading") c.grid.fermi_grading = parse_bool(f, value);
  else if (name == "refine") c.grid.refine = parse_int(f, value);
  else if (name == "out_decay_lengths") c.grid.out_decay_lengths = parse_real(f, value);
  else if (name == "out_panel") c.grid.out_panel = parse_real(f, value);
  else if (name == "d_range") c.d_range = parse_range(f, value);
  else if (name == "cell_n") c.cell_n = parse_int(f, value);
  else if (name == "field") c.field = parse_real(f, value);
  else if (name == "seed") c.seed = static_cast<std::uint64_t>(parse_int(f, value));
  else if (name == "b_range") c.b_range = parse_range(f, value);
  else if (name == "groups") c.groups = value.empty() ? std::vector<std::string>{} : split(value, ',');
  else if (name == "landau_n") c.landau_n = parse_int(f, value);
  else if (name == "refinement") c.refinement = parse_bool(f, value);
  else if (name == "g1_scale") c.g1_scale = parse_real(f, value);
  else if (name == "out") c.out = value;
  else if (name == "json") c.json = parse_bool(f, value);
}

void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  CLI::ConfigINI ini;
  ini.comment('#');
  for (const auto& item : ini.from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    std::vector<std::string> parents = item.parents;
    if (!parents.empty() && parents.front() == "default") parents.erase(parents.begin());
    std::string key = item.name;
    if (!parents.empty()) key = parents.back() + "." + item.name;
    apply_setting(c, key, value);
  }
}

void validate(const RunConfig& c, const std::string& command) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
  };
  try {
    parse_potential(c.potential);
  } catch (const Error& e) {
    throw UsageError(std::string("potential: ") + e.what());
  }
  require(std::isfinite(c.mu), "mu: must be finite");
  require(c.bracket.first > 0.0 && c.bracket.second > c.bracket.first, "bracket: need 0 < LO < HI");
  require(c.grid.r_order >= 2 && c.grid.p_order >= 2, "r_order/p_order: must be >= 2");
  require(c.grid.r_panel >= 0.0 && c.grid.p_panel >= 0.0, "r_panel/p_panel: must be >= 0");
  require(c.grid.r_max >= 0.0 && c.grid.p_max >= 0.0, "r_max/p_max: must be >= 0");
  require(c.grid.refine >= 1, "refine: must be >= 1");
  require(c.grid.out_decay_lengths > 0.0 && c.grid.out_panel > 0.0, "out_decay_lengths/out_panel: must be > 0");
  require(!c.out.empty(), "out: must not be empty");
  if (command == "glmin") {
    require(c.d_range.steps >= 1 && c.d_range.lo >= 0.0 && c.d_range.hi >= c.d_range.lo,
            "d-range: need 0 <= LO <= HI and STEPS >= 1");
    require(c.cell_n >= 4 && c.cell_n % 2 == 0, "cell-n: must be even and >= 4");
    require(c.field > 0.0, "field: must be > 0");
  }
  if (command == "tcshift")
    require(c.b_range.steps >= 1 && c.b_range.lo >= 0.0 && c.b_range.hi >= c.b_range.lo,
            "b-range: need 0 <= LO <= HI and STEPS >= 1");
  if (command == "verify") {
    for (const auto& g : c.groups)
      require(std::find(identity_groups().begin(), identity_groups().end(), g) != identity_groups().end(),
              "groups: unknown group '" + g + "'");
    require(c.cell_n >= 16 && c.cell_n % 2 == 0, "cell-n: must be even and >= 16");
    require(c.landau_n >= 16 && c.landau_n % 8 == 0, "landau_n: must be a multiple of 8, >= 16");
    require(c.g1_scale > 0.0, "g1_scale: must be > 0");
  }
}

// ---- commands --------------------------------------------------------------

struct Pipeline {
  const RunConfig& cfg;
  fs::path out;
  std::optional<GapSolution> sol;
  std::optional<GLCoefficients> coeffs;

  void write(const std::string& name, const std::string& content) {
    write_file_atomic(out / name, content);
    if (!cfg.json) std::cout << "  wrote " << (out / name).string() << "\n";
  }

  const GapSolution& gap() {
    if (!sol) {
      GapOptions o;
      o.grid = cfg.grid;
      sol = critical_temperature(*parse_potential(cfg.potential), cfg.mu, cfg.bracket, o);
      write("gap.json", to_json(*sol).dump(2) + "\n");
      write("alpha_star.dat", alpha_star_text(*sol));
    }
    return *sol;
  }

  const GLCoefficients& coefficients() {
    if (!coeffs) {
      coeffs = compute_coefficients(gap());
      write("coeffs.json", to_json(*coeffs).dump(2) + "\n");
    }
    return *coeffs;
  }
};

void row(const std::string& k, const std::string& v) { std::printf("  %-22s %s\n", k.c_str(), v.c_str()); }
std::string num(double v) { return format_double(v); }

int cmd_gap(Pipeline& p) {
  const auto& s = p.gap();
  if (p.cfg.json) {
    std::cout << to_json(s).dump(2) << "\n";
  } else {
    row("potential", s.potential);
    row("Tc", num(s.Tc));
    row("|eta - 1|", num(s.eta_residual));
    row("gap residual", num(s.gap_residual));
    row("kappa", num(s.kappa));
    row("e0", num(s.e0));
  }
  return kExitOk;
}

int cmd_coeffs(Pipeline& p) {
  const auto& c = p.coefficients();
  if (p.cfg.json) {
    std::cout << to_json(c).dump(2) << "\n";
  } else {
    row("Lambda0", num(c.Lambda0));
    row("Lambda2", num(c.Lambda2));
    row("Lambda3", num(c.Lambda3));
    row("Dc", num(c.Dc));
    row("Lambda2 FD check", num(c.provenance.lambda2_fd));
    row("Lambda0 Hessian check", num(c.provenance.lambda0_hessian));
    row("Lambda0 tanh check", num(c.provenance.lambda0_cross));
    row("Lambda3 Matsubara check", num(c.provenance.lambda3_matsubara));
  }
  return kExitOk;
}

int cmd_tcshift(Pipeline& p) {
  const auto& s = p.gap();
  const auto& c = p.coefficients();
  std::vector<TcShift> rows;
  for (double B : p.cfg.b_range.values()) rows.push_back(tc_shift(s.Tc, c.Dc, B));
  const std::string csv = tcshift_csv(rows);
  p.write("tcshift.csv", csv);
  if (p.cfg.json) {
    ojson j = ojson::array();
    for (const auto& r : rows) j.push_back({{"B", r.B}, {"Tc_B", r.T}, {"valid", r.valid}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

int cmd_glmin(Pipeline& p) {
  const auto& c = p.coefficients();
  const auto cell = MagneticCell::make(p.cfg.field, p.cfg.cell_n);
  GLOptions opts;
  opts.seed = p.cfg.seed;
  const GLSolver solver(cell, c, opts);
  std::vector<CurvePoint> curve;
  ojson runs = ojson::array();
  std::optional<GLResult> last;
  for (double ratio : p.cfg.d_range.values()) {
    auto r = solver.minimize(ratio * c.Dc, last ? &last->psi : nullptr);
    curve.push_back({r.D, r.energy, r.iterations, r.grad_norm});
    runs.push_back(to_json(r, cell));
    last = std::move(r);
  }
  ojson j;
  j["Dc"] = c.Dc;
  j["lowest_landau_eigenvalue"] = solver.lowest_eigenvalue();
  j["runs"] = runs;
  p.write("egl_curve.csv", egl_curve_csv(curve, c.Dc));
  p.write("glmin.json", j.dump(2) + "\n");
  p.write("psi.dat", psi_grid_text(last->psi, cell));
  if (p.cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("  %-20s %-20s %-24s %s\n", "D/Dc", "D", "E_GL", "iterations");
    for (const auto& pt : curve)
      std::printf("  %-20s %-20s %-24s %d\n", num(pt.D / c.Dc).c_str(), num(pt.D).c_str(), num(pt.energy).c_str(),
                  pt.iterations);
  }
  return kExitOk;
}

int cmd_verify(Pipeline& p) {
  VerifyConfig v;
  v.groups = p.cfg.groups;
  v.potential = p.cfg.potential;
  v.mu = p.cfg.mu;
  v.bracket = p.cfg.bracket;
  v.grid = p.cfg.grid;
  v.refinement = p.cfg.refinement;
  v.cell_n = p.cfg.cell_n;
  v.landau_n = p.cfg.landau_n;
  v.field = p.cfg.field;
  v.seed = p.cfg.seed;
  v.g1_scale = p.cfg.g1_scale;
  const auto report = run_identity_suite(v);
  const std::string text = report.to_jsonl();
  p.write("verify.jsonl", text);
  const auto s = report.summary();
  if (p.cfg.json) {
    std::cout << text;
  } else {
    for (const auto& e : report.entries)
      std::printf("  %-4s %-13s %-28s error %-24s tol %s\n", e.pass ? "ok" : "FAIL", e.group.c_str(), e.name.c_str(),
                  num(e.error).c_str(), num(e.tolerance).c_str());
    std::printf("  %d checks, %d passed, %d failed\n", s.total, s.passed, s.failed);
  }
  return report.all_passed() ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BCS critical temperature and Ginzburg-Landau coefficients"};
  app.require_subcommand(1);
  std::string config_path, out, potential, bracket, d_range, b_range;
  std::optional<double> mu;
  std::optional<int> cell_n;
  bool json = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file with [sections]");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--mu", mu, "chemical potential");
    sub->add_option("--potential", potential, "gaussian:V0,A | yukawa-cut:V0,A,RC | file:PATH");
    sub->add_option("--bracket", bracket, "temperature bracket LO,HI for Tc");
    sub->add_option("--d-range", d_range, "D/Dc sweep LO,HI,STEPS");
    sub->add_option("--b-range", b_range, "field sweep LO,HI,STEPS");
    sub->add_option("--cell-n", cell_n, "grid points per edge of the magnetic cell");
    sub->add_flag("--json", json, "print the JSON artifact instead of the summary table");
  };
  const char* names[][2] = {{"gap", "solve for Tc and alpha*"},
                            {"coeffs", "GL coefficients and Dc"},
                            {"tcshift", "Tc(1 - Dc B) over a field range"},
                            {"glmin", "minimize the GL functional over a D sweep"},
                            {"verify", "run the identity suite"}};
  for (const auto& n : names) add_common(app.add_subcommand(n[0], n[1]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) load_config_file(cfg, config_path);
    if (!out.empty()) cfg.out = out;
    if (mu) cfg.mu = *mu;
    if (!potential.empty()) cfg.potential = potential;
    if (!bracket.empty()) cfg.bracket = parse_pair("--bracket", bracket);
    if (!d_range.empty()) cfg.d_range = parse_range("--d-range", d_range);
    if (!b_range.empty()) cfg.b_range = parse_range("--b-range", b_range);
    if (cell_n) cfg.cell_n = *cell_n;
    if (json) cfg.json = true;
    validate(cfg, command);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: config: " << e.what() << "\n";
    return kExitUsage;
  }

  Pipeline p{cfg, fs::path(cfg.out), {}, {}};
  try {
    fs::create_directories(p.out);
    if (!cfg.json) std::cout << "bcsgl " << command << "\n";
    if (command == "gap") return cmd_gap(p);
    if (command == "coeffs") return cmd_coeffs(p);
    if (command == "tcshift") return cmd_tcshift(p);
    if (command == "glmin") return cmd_glmin(p);
    return cmd_verify(p);
  } catch (const std::exception& e) {
    ojson err;
    err["command"] = command;
    err["error"] = e.what();
    const fs::path report = p.out / "error.json";
    try {
      write_file_atomic(report, err.dump(2) + "\n");
      std::cerr << "numerical failure: " << e.what() << "\nreport: " << report.string() << "\n";
    } catch (const std::exception&) {
      std::cerr << "numerical failure: " << e.what() << "\n";
    }
    return kExitNumerical;
  }
}
