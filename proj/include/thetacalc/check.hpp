#pragma once

#include <string>

namespace thetacalc {

/// Outcome of a verification routine. On failure `witness` holds the
/// canonical rendering of the offending element.
struct CheckResult {
  bool pass = true;
  std::string witness;

  static CheckResult ok() { return {}; }
  static CheckResult fail(std::string w) { return {false, std::move(w)}; }

  /// Keeps the first failure.
  CheckResult& operator&=(const CheckResult& other) {
    if (pass && !other.pass) *this = other;
    return *this;
  }
};

}  // namespace thetacalc
