#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aggmc {

/// Stable, machine-readable failure categories. The string form returned by
/// to_string() is part of the CLI report contract and must not change.
enum class ErrorCode {
  NotSquare,
  AlphabetTooSmall,
  NegativeEntry,
  RowSumViolation,
  InvalidPermutation,
  InvalidSymbol,
  InputFormat,
  Io,
  TrivialFactor,
  NotIrreducible,
  NotPeriodic,
  NotPrimitive,
  ReducibleInput,
  ConvergenceFailure,
  UnreachableRun,
  DegenerateDirection,
  NotStrictlyPositive,
  EnumerationTooLarge,
  UnreachableEvent,
  ReducibleChain,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors caused by malformed or invalid input (CLI exit code 1);
/// everything else is an analysis error (exit code 2).
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aggmc
