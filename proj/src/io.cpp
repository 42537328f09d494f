#include "bcsgl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "bcsgl/error.hpp"

namespace bcsgl {

namespace {

ojson number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

ojson to_json(const GridConfig& g) {
  ojson j;
  j["r_order"] = g.r_order;
  j["r_panel"] = g.r_panel;
  j["r_max"] = g.r_max;
  j["p_order"] = g.p_order;
  j["p_panel"] = g.p_panel;
  j["p_max"] = g.p_max;
  j["fermi_grading"] = g.fermi_grading;
  j["refine"] = g.refine;
  j["out_decay_lengths"] = g.out_decay_lengths;
  j["out_panel"] = g.out_panel;
  return j;
}

ojson to_json(const GapSolution& s) {
  ojson j;
  j["potential"] = s.potential;
  j["mu"] = s.mu;
  j["Tc"] = s.Tc;
  j["eta"] = s.eta;
  j["eta_residual"] = s.eta_residual;
  j["gap_residual"] = s.gap_residual;
  j["kappa"] = number(s.kappa);
  j["e0"] = s.e0;
  j["degenerate"] = s.degenerate;
  j["alpha_norm_momentum"] = s.norm_momentum;
  j["bisection_steps"] = s.bisection_steps;
  ojson g;
  g["r_nodes"] = s.rgrid.size();
  g["r_max"] = s.rgrid.upper();
  g["p_nodes"] = s.v_alpha_hat.grid.size();
  g["p_max"] = s.v_alpha_hat.grid.upper();
  g["alpha_nodes"] = s.alpha_star.grid.size();
  g["alpha_r_max"] = s.alpha_star.grid.upper();
  g["fine_p_nodes"] = s.v_alpha_hat_fine.grid.size();
  j["grid"] = g;
  return j;
}

ojson to_json(const GLCoefficients& c) {
  ojson j;
  j["Lambda0"] = c.Lambda0;
  j["Lambda2"] = c.Lambda2;
  j["Lambda3"] = c.Lambda3;
  j["Dc"] = c.Dc;
  const auto& p = c.provenance;
  ojson pj;
  pj["potential"] = p.potential;
  pj["mu"] = p.mu;
  pj["Tc"] = p.Tc;
  pj["r_nodes"] = p.r_nodes;
  pj["p_nodes"] = p.p_nodes;
  pj["r_max"] = p.r_max;
  pj["p_max"] = p.p_max;
  pj["alpha_nodes"] = p.alpha_nodes;
  pj["alpha_r_max"] = p.alpha_r_max;
  pj["matsubara_min"] = p.matsubara_min;
  pj["matsubara_max"] = p.matsubara_max;
  ojson cross;
  cross["lambda2_finite_difference"] = p.lambda2_fd;
  cross["lambda0_hessian"] = p.lambda0_hessian;
  cross["lambda0_tanh_form"] = p.lambda0_cross;
  cross["lambda3_matsubara"] = p.lambda3_matsubara;
  pj["cross_checks"] = cross;
  j["provenance"] = pj;
  return j;
}

ojson to_json(const GLResult& r, const MagneticCell& cell) {
  ojson j;
  j["D"] = r.D;
  j["energy"] = r.energy;
  j["initial_energy"] = r.initial_energy;
  j["iterations"] = r.iterations;
  j["grad_norm"] = r.grad_norm;
  ojson cj;
  cj["B"] = cell.B;
  cj["side"] = cell.side;
  cj["N"] = cell.N;
  cj["x0"] = cell.x0;
  j["cell"] = cj;
  double m2 = 0.0;
  for (const auto& v : r.psi.values) m2 += std::norm(v);
  j["mean_abs2"] = r.psi.values.empty() ? 0.0 : m2 / static_cast<double>(r.psi.values.size());
  return j;
}

std::string alpha_star_text(const GapSolution& s) {
  std::ostringstream os;
  Metadata meta{{"quantity", "alpha_star"},
                {"potential", s.potential},
                {"mu", format_double(s.mu)},
                {"Tc", format_double(s.Tc)}};
  write_two_column(os, s.alpha_star.grid, s.alpha_star.values, meta);
  return os.str();
}

std::string psi_grid_text(const OrderParameterField& psi, const MagneticCell& cell) {
  if (psi.N != cell.N || psi.values.size() != cell.size())
    throw Error(ErrorKind::InvalidArgument, "order parameter does not live on this cell");
  std::string out = "# x y re im\n";
  for (int k = 0; k < cell.N; ++k)
    for (int j = 0; j < cell.N; ++j) {
      const auto v = psi.values[cell.index(j, k)];
      out += format_double(j * cell.h) + ' ' + format_double(k * cell.h) + ' ' + format_double(v.real()) + ' ' +
             format_double(v.imag()) + '\n';
    }
  return out;
}

std::string egl_curve_csv(const std::vector<CurvePoint>& curve, double Dc) {
  std::string out = "D,D_over_Dc,energy,iterations,grad_norm\n";
  for (const auto& p : curve)
    out += format_double(p.D) + ',' + format_double(p.D / Dc) + ',' + format_double(p.energy) + ',' +
           std::to_string(p.iterations) + ',' + format_double(p.grad_norm) + '\n';
  return out;
}

std::string tcshift_csv(const std::vector<TcShift>& rows) {
  std::string out = "B,Tc_B,valid\n";
  for (const auto& r : rows) out += format_double(r.B) + ',' + format_double(r.T) + ',' + (r.valid ? "1" : "0") + '\n';
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::Io, "cannot open " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace bcsgl
