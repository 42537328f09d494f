#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bcsgl/gap.hpp"

namespace bcsgl {

struct VerifyEntry {
  std::string group;
  std::string name;
  std::string anchor;  // short description of the identity being checked
  std::vector<std::pair<std::string, double>> params;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;   // error <= tolerance
  std::string note;    // exception text when the check itself failed
};

struct VerifySummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  double max_error_ratio = 0.0;  // max error / tolerance over entries with positive tolerance
};

struct VerificationReport {
  std::vector<VerifyEntry> entries;

  VerifySummary summary() const;
  bool all_passed() const;
  /// One JSON object per entry followed by a summary object.
  std::string to_jsonl() const;
};

struct VerifyConfig {
  std::vector<std::string> groups;  // subset of identity_groups(), run in declaration order
  std::string potential = "gaussian:2,1";
  double mu = 1.0;
  std::pair<double, double> bracket{0.05, 0.2};
  GridConfig grid;
  bool refinement = true;  // grid-doubling checks for Tc and the coefficients
  int cell_n = 64;         // GL minimization cell
  int landau_n = 128;      // finest cell of the Landau-level study
  double field = 1.0;
  std::uint64_t seed = 20240601;
  double g1_scale = 1.0;   // mutation knob: scales the g1 closed form in the Matsubara identities
};

/// "symbols", "gap", "coefficients", "minimizer".
const std::vector<std::string>& identity_groups();

/// Runs the selected groups. Numerical failures inside a check become failed
/// entries; nothing is thrown for them.
VerificationReport run_identity_suite(const VerifyConfig& cfg);

}  // namespace bcsgl
