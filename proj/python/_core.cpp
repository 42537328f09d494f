#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcsgl/error.hpp"
#include "bcsgl/gap.hpp"
#include "bcsgl/glcoeff.hpp"
#include "bcsgl/glmin.hpp"
#include "bcsgl/io.hpp"
#include "bcsgl/potential.hpp"
#include "bcsgl/symbols.hpp"
#include "bcsgl/verify.hpp"

namespace py = pybind11;
using namespace bcsgl;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::array_t<cplx> psi_array(const OrderParameterField& psi) {
  // rows are y (index k), columns are x (index j)
  py::array_t<cplx> a({psi.N, psi.N});
  std::copy(psi.values.begin(), psi.values.end(), a.mutable_data());
  return a;
}

GapOptions gap_options(const std::optional<GridConfig>& grid) {
  GapOptions o;
  if (grid) o.grid = *grid;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "BCS critical temperature and Ginzburg-Landau coefficients";

  py::register_exception<Error>(m, "BcsglError", PyExc_RuntimeError);

  py::class_<GridConfig>(m, "GridConfig")
      .def(py::init<>())
      .def_readwrite("r_order", &GridConfig::r_order)
      .def_readwrite("r_panel", &GridConfig::r_panel)
      .def_readwrite("r_max", &GridConfig::r_max)
      .def_readwrite("p_order", &GridConfig::p_order)
      .def_readwrite("p_panel", &GridConfig::p_panel)
      .def_readwrite("p_max", &GridConfig::p_max)
      .def_readwrite("fermi_grading", &GridConfig::fermi_grading)
      .def_readwrite("refine", &GridConfig::refine)
      .def_readwrite("out_decay_lengths", &GridConfig::out_decay_lengths)
      .def_readwrite("out_panel", &GridConfig::out_panel)
      .def("doubled", &GridConfig::doubled);

  // symbols
  auto sym = m.def_submodule("symbols", "Fermi-Dirac symbols and their Matsubara forms");
  sym.def("kt_symbol", &symbols::kt_symbol, py::arg("x"), py::arg("T"));
  sym.def("lt_symbol", &symbols::lt_symbol, py::arg("p"), py::arg("q"), py::arg("T"), py::arg("mu"));
  sym.def("g1", &symbols::g1, py::arg("z"));
  sym.def("g2", &symbols::g2, py::arg("z"));
  sym.def("sech2", &symbols::sech2, py::arg("x"));
  sym.def("g0_weighted_l1", &symbols::g0_weighted_l1, py::arg("a"), py::arg("z"), py::arg("mu"));
  sym.def("g0_weighted_l1_quadrature", &symbols::g0_weighted_l1_quadrature, py::arg("a"), py::arg("z"),
          py::arg("mu"));
  sym.def(
      "kt_contour_eval",
      [](double x, double T, double mu, double R) { return symbols::kt_contour_eval(x, T, mu, R); }, py::arg("x"),
      py::arg("T"), py::arg("mu"), py::arg("R") = 50.0);
  sym.def(
      "cosh2_matsubara_sum",
      [](double beta, double z, std::int64_t cutoff) {
        const auto s = symbols::cosh2_matsubara_sum_accelerated(beta, z, {cutoff});
        return py::make_tuple(s.value, s.tail_bound);
      },
      py::arg("beta"), py::arg("z"), py::arg("cutoff"), "(value, tail_bound) of the accelerated sum");
  sym.def(
      "quartic_matsubara_sum",
      [](double beta, double E, std::int64_t cutoff) {
        const auto s = symbols::quartic_matsubara_sum(beta, E, {cutoff});
        return py::make_tuple(s.value, s.tail_bound);
      },
      py::arg("beta"), py::arg("E"), py::arg("cutoff"));

  // gap
  py::class_<GapSolution>(m, "GapSolution")
      .def_readonly("Tc", &GapSolution::Tc)
      .def_readonly("mu", &GapSolution::mu)
      .def_readonly("eta", &GapSolution::eta)
      .def_readonly("eta_residual", &GapSolution::eta_residual)
      .def_readonly("gap_residual", &GapSolution::gap_residual)
      .def_readonly("kappa", &GapSolution::kappa)
      .def_readonly("e0", &GapSolution::e0)
      .def_readonly("degenerate", &GapSolution::degenerate)
      .def_readonly("potential", &GapSolution::potential)
      .def_property_readonly("r", [](const GapSolution& s) { return to_array(s.alpha_star.grid.nodes()); })
      .def_property_readonly("alpha_star", [](const GapSolution& s) { return to_array(s.alpha_star.values); })
      .def("to_json", [](const GapSolution& s) { return to_json(s).dump(); });

  m.def(
      "critical_temperature",
      [](const std::string& potential, double mu, std::pair<double, double> bracket,
         const std::optional<GridConfig>& grid) {
        const auto V = parse_potential(potential);
        py::gil_scoped_release release;
        return critical_temperature(*V, mu, bracket, gap_options(grid));
      },
      py::arg("potential") = "gaussian:2,1", py::arg("mu") = 1.0, py::arg("bracket") = std::pair{0.05, 0.2},
      py::arg("grid") = py::none());

  // coefficients
  py::class_<GLCoefficients>(m, "GLCoefficients")
      .def(py::init([](double L0, double L2, double L3) {
             GLCoefficients c;
             c.Lambda0 = L0;
             c.Lambda2 = L2;
             c.Lambda3 = L3;
             c.Dc = critical_ratio_Dc(L0, L2);
             return c;
           }),
           py::arg("Lambda0"), py::arg("Lambda2"), py::arg("Lambda3"))
      .def_readonly("Lambda0", &GLCoefficients::Lambda0)
      .def_readonly("Lambda2", &GLCoefficients::Lambda2)
      .def_readonly("Lambda3", &GLCoefficients::Lambda3)
      .def_readonly("Dc", &GLCoefficients::Dc)
      .def("to_json", [](const GLCoefficients& c) { return to_json(c).dump(); });

  m.def(
      "compute_coefficients",
      [](const GapSolution& sol, bool cross_checks) {
        py::gil_scoped_release release;
        return compute_coefficients(sol, {cross_checks});
      },
      py::arg("solution"), py::arg("cross_checks") = true);

  py::class_<TcShift>(m, "TcShift")
      .def_readonly("B", &TcShift::B)
      .def_readonly("T", &TcShift::T)
      .def_readonly("valid", &TcShift::valid);
  m.def("tc_shift", py::overload_cast<double, double, double>(&tc_shift), py::arg("Tc"), py::arg("Dc"),
        py::arg("B"));

  // GL minimization
  py::class_<GLResult>(m, "GLResult")
      .def_readonly("D", &GLResult::D)
      .def_readonly("energy", &GLResult::energy)
      .def_readonly("iterations", &GLResult::iterations)
      .def_readonly("grad_norm", &GLResult::grad_norm)
      .def_property_readonly("psi", [](const GLResult& r) { return psi_array(r.psi); });

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("D", &CurvePoint::D)
      .def_readonly("energy", &CurvePoint::energy)
      .def_readonly("iterations", &CurvePoint::iterations)
      .def_readonly("grad_norm", &CurvePoint::grad_norm);

  py::class_<ExponentFit>(m, "ExponentFit")
      .def_readonly("exponent", &ExponentFit::exponent)
      .def_readonly("prefactor", &ExponentFit::prefactor)
      .def_readonly("points", &ExponentFit::points);

  py::class_<ScalingReport>(m, "ScalingReport")
      .def_readonly("E1", &ScalingReport::E1)
      .def_readonly("E2", &ScalingReport::E2)
      .def_readonly("relative_difference", &ScalingReport::relative_difference);

  m.def(
      "landau_levels",
      [](double B, int N, int count) {
        const auto s = landau_levels(MagneticCell::make(B, N), count);
        return s.eigenvalues;
      },
      py::arg("B") = 1.0, py::arg("N") = 64, py::arg("count") = 4);

  m.def(
      "minimize_gl",
      [](double D, const GLCoefficients& c, double B, int N, std::uint64_t seed) {
        GLOptions o;
        o.seed = seed;
        py::gil_scoped_release release;
        return minimize_gl(D, c, MagneticCell::make(B, N), o);
      },
      py::arg("D"), py::arg("coefficients"), py::arg("B") = 1.0, py::arg("N") = 64,
      py::arg("seed") = GLOptions{}.seed);

  m.def(
      "egl_curve",
      [](const std::vector<double>& D, const GLCoefficients& c, double B, int N) {
        py::gil_scoped_release release;
        return egl_curve(D, c, MagneticCell::make(B, N));
      },
      py::arg("D_values"), py::arg("coefficients"), py::arg("B") = 1.0, py::arg("N") = 64);

  m.def("fit_threshold_exponent", &fit_threshold_exponent, py::arg("curve"), py::arg("Dc"), py::arg("lo") = 1.01,
        py::arg("hi") = 1.1);

  m.def(
      "scaling_check",
      [](double D, const GLCoefficients& c, double B1, double B2, int N) {
        py::gil_scoped_release release;
        return scaling_check(D, c, B1, B2, N);
      },
      py::arg("D"), py::arg("coefficients"), py::arg("B1") = 1.0, py::arg("B2") = 4.0, py::arg("N") = 64);

  // verification
  m.def("identity_groups", &identity_groups);
  m.def(
      "run_identity_suite",
      [](std::vector<std::string> groups, const std::string& potential, double mu, int cell_n, bool refinement,
         double g1_scale) {
        VerifyConfig cfg;
        cfg.groups = groups.empty() ? identity_groups() : std::move(groups);
        cfg.potential = potential;
        cfg.mu = mu;
        cfg.cell_n = cell_n;
        cfg.refinement = refinement;
        cfg.g1_scale = g1_scale;
        py::gil_scoped_release release;
        return run_identity_suite(cfg).to_jsonl();
      },
      py::arg("groups") = std::vector<std::string>{}, py::arg("potential") = "gaussian:2,1", py::arg("mu") = 1.0,
      py::arg("cell_n") = 64, py::arg("refinement") = true, py::arg("g1_scale") = 1.0,
      "JSON lines: one object per check followed by a summary object");
}
