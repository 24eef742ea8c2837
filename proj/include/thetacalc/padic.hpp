#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "thetacalc/error.hpp"

namespace thetacalc {

/// True for the primes this library supports (2, 3 and 5).
bool is_supported_prime(unsigned p);

/// Largest precision whose modulus p^precision stays below 2^63.
int max_precision(unsigned p);

/// p^k as an unsigned integer; k must not exceed max_precision(p).
std::uint64_t prime_power(unsigned p, int k);

/// v_p(n) for n > 0.
int vp(unsigned p, std::uint64_t n);

/// v_p(n!) by Legendre's formula.
int vp_factorial(unsigned p, std::uint64_t n);

/// Result of a valuation query. When the residue is zero only a lower bound
/// is known, reported as `at_least_precision` with `value` = precision.
struct Valuation {
  int value = 0;
  bool at_least_precision = false;

  bool at_least(int k) const { return value >= k; }
  bool operator==(const Valuation&) const = default;
};

/// A p-adic integer known modulo p^precision.
///
/// The residue is always the canonical representative in [0, p^precision).
/// Ring operations report the minimum of the input precisions; exact division
/// by p^k costs k digits. Precision is therefore a worst-case bound and a
/// NotDivisible failure always means a genuine integrality violation.
class PadicInt {
 public:
  PadicInt() = default;

  /// Reduces `value` (any sign) modulo p^precision.
  static PadicInt from_int(unsigned p, std::int64_t value, int precision);
  static PadicInt from_residue(unsigned p, std::uint64_t residue, int precision);
  static PadicInt zero(unsigned p, int precision) { return from_residue(p, 0, precision); }
  static PadicInt one(unsigned p, int precision) { return from_residue(p, 1, precision); }

  unsigned prime() const { return prime_; }
  int precision() const { return precision_; }
  std::uint64_t residue() const { return residue_; }
  std::uint64_t modulus() const { return prime_power(prime_, precision_); }

  /// Representative in (-modulus/2, modulus/2].
  std::int64_t balanced() const;

  bool is_zero() const { return residue_ == 0; }
  bool is_unit() const { return residue_ % prime_ != 0; }
  Valuation valuation() const;

  /// Forget digits: precision must not increase.
  PadicInt reduce_to(int precision) const;

  /// Multiplication by the exact constant p^k. The product is known to k more
  /// digits than the input; the result is capped at `max_precision`.
  PadicInt mul_p_power(int k) const;

  PadicInt pow(std::uint64_t e) const;

  /// Equality at the common (minimum) precision.
  bool congruent(const PadicInt& other) const;

  PadicInt operator-() const;
  PadicInt& operator+=(const PadicInt& o);
  PadicInt& operator-=(const PadicInt& o);
  PadicInt& operator*=(const PadicInt& o);
  friend PadicInt operator+(PadicInt a, const PadicInt& b) { return a += b; }
  friend PadicInt operator-(PadicInt a, const PadicInt& b) { return a -= b; }
  friend PadicInt operator*(PadicInt a, const PadicInt& b) { return a *= b; }

  /// Structural equality: same prime, precision and residue.
  bool operator==(const PadicInt&) const = default;

  std::string to_string() const;

 private:
  PadicInt(unsigned p, std::uint64_t r, int prec) : prime_(p), precision_(prec), residue_(r) {}
  void check_same_prime(const PadicInt& o) const;

  unsigned prime_ = 2;
  int precision_ = 1;
  std::uint64_t residue_ = 0;
};

std::ostream& operator<<(std::ostream& os, const PadicInt& x);

/// x / p^k. Throws NotDivisible when v_p(x) < k and PrecisionExhausted when
/// x.precision() <= k.
PadicInt exact_div_p(const PadicInt& x, int k);

/// Division by a nonzero integer whose p-part must divide x.
PadicInt exact_div_int(const PadicInt& x, std::uint64_t d);

/// Inverse of a unit. Throws NotAUnit.
PadicInt unit_inverse(const PadicInt& x);

/// Teichmüller representative of x mod p, at x's precision.
PadicInt teichmuller_lift(const PadicInt& x);

/// Digits a_0..a_{count-1} with each a_i zero or a (p-1)th root of unity and
/// x = sum a_i p^i mod p^count. Digits carry x's precision.
std::vector<PadicInt> teichmuller_digits(const PadicInt& x, int count);

/// binom(x, n) with precision x.precision() - v_p(n!).
PadicInt padic_binomial(const PadicInt& x, std::uint64_t n);

/// p-adic logarithm on 1 + pZ_p (1 + 4Z_2 at p = 2). Throws OutsideDomain.
PadicInt padic_log(const PadicInt& x);

}  // namespace thetacalc
