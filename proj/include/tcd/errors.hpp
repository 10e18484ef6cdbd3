#ifndef TCD_ERRORS_HPP
#define TCD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tcd {

enum class ErrorCode {
  // input / schema problems
  InvalidInput,
  NotSquare,
  DimensionMismatch,
  NotOnUnitCircle,
  ZeroModulus,
  InvalidDecomposition,
  // numerical failures
  NoConvergence,
  TriangularizationFailed,
  DegeneracyNotResolved,
  VerificationFailed,
  ClusterAmbiguity,
  // mathematical precondition violations
  NotHermitian,
  NotPSD,
  NotCommuting,
  NotNormalTuple,
  NotContractive,
  RankDefect,
};

// Coarse grouping used by the CLI to pick exit codes.
enum class ErrorCategory {
  InvalidInput,  // exit 2
  Numerical,     // exit 3
  Precondition,  // exit 4
};

inline ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::NotSquare:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotOnUnitCircle:
    case ErrorCode::ZeroModulus:
    case ErrorCode::InvalidDecomposition:
      return ErrorCategory::InvalidInput;
    case ErrorCode::NoConvergence:
    case ErrorCode::TriangularizationFailed:
    case ErrorCode::DegeneracyNotResolved:
    case ErrorCode::VerificationFailed:
    case ErrorCode::ClusterAmbiguity:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Precondition;
  }
}

inline const char* name_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotOnUnitCircle: return "NotOnUnitCircle";
    case ErrorCode::ZeroModulus: return "ZeroModulus";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TriangularizationFailed: return "TriangularizationFailed";
    case ErrorCode::DegeneracyNotResolved: return "DegeneracyNotResolved";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::ClusterAmbiguity: return "ClusterAmbiguity";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NotNormalTuple: return "NotNormalTuple";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::RankDefect: return "RankDefect";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(name_of(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace tcd

#endif  // TCD_ERRORS_HPP
