#pragma once

#include <stdexcept>
#include <string>

namespace bcsgl {

// Failure categories. The CLI maps these onto exit codes; the verification
// suite records them as failed entries.
enum class ErrorKind {
  InvalidArgument,
  InvalidGrid,
  Truncation,
  Divergence,
  SingularEvaluation,
  BranchCut,
  NoRoot,
  Solver,
  Contour,
  DivisionGuard,
  NonConvergence,
  DecayViolation,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::InvalidGrid: return "invalid grid";
    case ErrorKind::Truncation: return "truncation error";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::SingularEvaluation: return "singular evaluation";
    case ErrorKind::BranchCut: return "branch cut";
    case ErrorKind::NoRoot: return "no root in bracket";
    case ErrorKind::Solver: return "eigensolver failure";
    case ErrorKind::Contour: return "contour quadrature failure";
    case ErrorKind::DivisionGuard: return "division guard";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::DecayViolation: return "decay violation";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

}  // namespace bcsgl
