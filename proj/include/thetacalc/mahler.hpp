#pragma once

#include <span>
#include <string>
#include <vector>

#include "thetacalc/check.hpp"
#include "thetacalc/theta.hpp"

namespace thetacalc {

/// binom(x, k) mod p^N for k < count and an exact integer x (any sign).
std::vector<PadicInt> binomials_at(__int128 x, std::size_t count, unsigned p, int N);

/// A continuous function Z_p -> Z/p^N, x |-> Σ c_k binom(x, k).
///
/// The coefficient list is complete: every coefficient past the stored ones
/// vanishes mod p^N. Trailing zeros are trimmed, so equality is structural.
class MahlerFn1 {
 public:
  MahlerFn1(unsigned p, int N, std::vector<PadicInt> coefficients);

  static MahlerFn1 zero(unsigned p, int N) { return {p, N, {}}; }
  static MahlerFn1 constant(unsigned p, int N, std::int64_t c);
  /// β_k = binom(·, k).
  static MahlerFn1 binomial(unsigned p, int N, std::size_t k);
  static MahlerFn1 identity(unsigned p, int N) { return binomial(p, N, 1); }

  /// Mahler inversion c_k = (Δ^k f)(0) from values at 0..M. The last
  /// `verify_trailing` differences must vanish, certifying completeness;
  /// otherwise IncompleteSampleWindow.
  static MahlerFn1 from_samples(std::span<const PadicInt> values, int N, unsigned verify_trailing = 2);

  unsigned prime() const { return p_; }
  int modulus_exponent() const { return N_; }
  const std::vector<PadicInt>& coefficients() const { return c_; }
  std::size_t length() const { return c_.size(); }
  PadicInt coefficient(std::size_t k) const;
  bool is_zero() const { return c_.empty(); }

  MahlerFn1 operator-() const;
  friend MahlerFn1 operator+(const MahlerFn1& a, const MahlerFn1& b);
  friend MahlerFn1 operator-(const MahlerFn1& a, const MahlerFn1& b);
  MahlerFn1 scale(const PadicInt& c) const;
  /// Multiplication by p^k, known mod p^{N+k}.
  MahlerFn1 mul_p_power(int k) const;
  /// Coefficientwise division by p^k, known mod p^{N-k}.
  MahlerFn1 exact_div_p(int k) const;
  MahlerFn1 reduce_to(int N) const;

  bool operator==(const MahlerFn1& other) const;

  /// "[c_0, c_1, ...] mod p^N" with balanced coefficients.
  std::string render() const;

 private:
  unsigned p_;
  int N_;
  std::vector<PadicInt> c_;
};

/// f(0), ..., f(count - 1) by running the difference table forward.
std::vector<PadicInt> sample(const MahlerFn1& f, std::size_t count);

/// f(x). The answer is known mod p^min(N, P - floor(log_p(length - 1)))
/// where P is the precision of x.
PadicInt evaluate(const MahlerFn1& f, const PadicInt& x);
PadicInt evaluate(const MahlerFn1& f, std::int64_t x);

/// Pointwise product, by sampling and redifferencing.
MahlerFn1 multiply(const MahlerFn1& f, const MahlerFn1& g);
MahlerFn1 power(const MahlerFn1& f, std::uint64_t e);

/// x |-> f(x + c): the Adams operation ψ^g is translate(f, 1).
MahlerFn1 translate(const MahlerFn1& f, std::int64_t c);
MahlerFn1 translate(const MahlerFn1& f, const PadicInt& c);

/// Two-variable function Σ c_{jk} binom(x, j) binom(y, k).
class MahlerFn2 {
 public:
  MahlerFn2(unsigned p, int N, std::vector<std::vector<PadicInt>> coefficients);

  /// From values on the grid [0, rows) x [0, cols), assumed complete.
  static MahlerFn2 from_grid(const std::vector<std::vector<PadicInt>>& values, unsigned p, int N);
  /// (x, y) |-> f(x) g(y).
  static MahlerFn2 outer(const MahlerFn1& f, const MahlerFn1& g);

  unsigned prime() const { return p_; }
  int modulus_exponent() const { return N_; }
  const std::vector<std::vector<PadicInt>>& coefficients() const { return c_; }
  PadicInt coefficient(std::size_t j, std::size_t k) const;
  bool is_zero() const { return c_.empty(); }

  friend MahlerFn2 operator+(const MahlerFn2& a, const MahlerFn2& b);
  MahlerFn2 scale(const PadicInt& c) const;
  bool operator==(const MahlerFn2& other) const;
  std::string render() const;

 private:
  void trim();

  unsigned p_;
  int N_;
  std::vector<std::vector<PadicInt>> c_;
};

PadicInt evaluate(const MahlerFn2& f, std::int64_t x, std::int64_t y);

/// Hopf structure of Maps_cts(Z_p, Z_p) in additive coordinates:
/// Δf(x, y) = f(x + y), ε(f) = f(0), S(f)(x) = f(-x).
struct HopfOps {
  MahlerFn2 coproduct;
  PadicInt counit;
  MahlerFn1 antipode;
};

MahlerFn2 comultiply(const MahlerFn1& f);
MahlerFn1 antipode(const MahlerFn1& f);
HopfOps hopf_ops(const MahlerFn1& f);

/// π(b_n) mod p^N, solved from id = Σ_{k<=n} p^k π(b_k)^{p^{n-k}}.
MahlerFn1 pi_bn(unsigned n, unsigned p, int N);

/// π on a free θ-algebra: base_n |-> π(b_n), extended multiplicatively.
MahlerFn1 pi_map(const ThetaElement& a, int N, const std::string& base = "b");

/// π ⊗ π on T(x_base, y_base) into functions of two variables.
MahlerFn2 pi_map2(const ThetaElement& a, int N, const std::string& x_base, const std::string& y_base);

/// s(Σ c_k β_k) = Σ c_k λ^k(b) in the given presentation.
ThetaElement section_s(const MahlerFn1& f, const PresentationPtr& presentation, const std::string& base = "b");

/// Σ_k A_k ⊗ β_k in T(b) ⊗ Maps_cts(Z_p, Z/p^N).
struct TensorImage {
  std::vector<ThetaElement> components;
  bool is_zero() const;
  std::string render() const;
};

/// ((1 - sπ) ⊗ π) Δ applied to s(β_n). `input` receives s(β_n).
TensorImage hopkins_mistake_image(unsigned n, const PresentationPtr& presentation, int N, ThetaElement* input = nullptr);

/// Passes when the image vanishes while s(β_n) does not.
CheckResult hopkins_mistake_check(unsigned n, const PresentationPtr& presentation, int N);

/// Teichmüller-digit basis. Generators alpha_0 .. alpha_m satisfy α_i^p = α_i
/// and evaluate to the Teichmüller digits of the argument.
RewriteSystem alpha_rules(const RegistryPtr& registry, unsigned p, unsigned m, int N);

/// f as a reduced polynomial in alpha_0 .. alpha_m. WindowTooSmall unless f
/// has period p^{m+1}.
SparsePoly to_alpha(const MahlerFn1& f, unsigned m, const RegistryPtr& registry);

/// The function of an α-polynomial, with complete Mahler list mod p^N.
MahlerFn1 from_alpha(const SparsePoly& a, int N);

/// (π ⊗ π)(λ^n(b - b̄)) = binom(x - y, n) on a grid, and f(x, y) = f(0, y - x).
CheckResult antidiagonal_check(unsigned n, unsigned p, int N, unsigned grid = 8);

}  // namespace thetacalc
