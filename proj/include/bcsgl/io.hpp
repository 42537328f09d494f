#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bcsgl/gap.hpp"
#include "bcsgl/glcoeff.hpp"
#include "bcsgl/glmin.hpp"
#include "json.hpp"

namespace bcsgl {

using ojson = nlohmann::ordered_json;

ojson to_json(const GridConfig& g);
ojson to_json(const GapSolution& s);
ojson to_json(const GLCoefficients& c);
/// Summary fields only; the field itself goes through psi_grid_text.
ojson to_json(const GLResult& r, const MagneticCell& cell);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// alpha* as two-column text with grid metadata.
std::string alpha_star_text(const GapSolution& s);
/// One `x y re im` row per site.
std::string psi_grid_text(const OrderParameterField& psi, const MagneticCell& cell);
std::string egl_curve_csv(const std::vector<CurvePoint>& curve, double Dc);
std::string tcshift_csv(const std::vector<TcShift>& rows);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace bcsgl
