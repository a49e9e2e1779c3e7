#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace randinf {

enum class ErrorCode {
  // validation
  NonFiniteValue,
  EmptySample,
  UnsortedAlphabet,
  MassNotNormalized,
  InvalidArgument,
  DimensionMismatch,
  AtomNotInAlphabet,
  SingularMatrix,
  EqualPoints,
  SameAtom,
  LevelOutOfRange,
  NotExplicitGroup,
  IncompatibleTransforms,
  ZeroDiff,
  UnknownDgp,
  ParseError,
  // construction failures
  WidthBoundViolated,
  TargetOutOfRange,
  NoGapInterval,
  QuantileNotInterior,
  BisectionFailed,
  NoCounterexampleFound,
  // caps and budgets
  GroupTooLarge,
  SizeCap,
  OrderExceedsCap,
  BudgetExceeded,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors raised because a configured cap or budget ran out,
/// as opposed to malformed input.
bool is_exhaustion(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace randinf
