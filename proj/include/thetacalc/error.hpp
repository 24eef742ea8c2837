#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thetacalc {

enum class ErrorKind {
  PrimeMismatch,
  UnsupportedPrime,
  PrecisionOverflow,
  PrecisionExhausted,
  NotDivisible,
  NotAUnit,
  OutsideDomain,
  CountExceedsPrecision,
  RegistryMismatch,
  UnassignedGenerator,
  NonTerminating,
  LevelCapExceeded,
  IncompleteSampleWindow,
  WindowTooSmall,
  BaseNotInvertible,
  NotIntegral,
  InsufficientInput,
  UnsupportedDegree,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library surfaces as an Error carrying its kind.
/// Integrality failures (NotDivisible, NotIntegral) carry the offending value
/// in the message so that a failed check can report it as a witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace thetacalc
