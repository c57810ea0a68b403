#include "aggmc/error.hpp"

namespace aggmc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::AlphabetTooSmall: return "AlphabetTooSmall";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::InvalidSymbol: return "InvalidSymbol";
    case ErrorCode::InputFormat: return "InputFormat";
    case ErrorCode::Io: return "Io";
    case ErrorCode::TrivialFactor: return "TrivialFactor";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::ReducibleInput: return "ReducibleInput";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::UnreachableRun: return "UnreachableRun";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::NotStrictlyPositive: return "NotStrictlyPositive";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::UnreachableEvent: return "UnreachableEvent";
    case ErrorCode::ReducibleChain: return "ReducibleChain";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare:
    case ErrorCode::AlphabetTooSmall:
    case ErrorCode::NegativeEntry:
    case ErrorCode::RowSumViolation:
    case ErrorCode::InvalidPermutation:
    case ErrorCode::InvalidSymbol:
    case ErrorCode::InputFormat:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

}  // namespace aggmc
