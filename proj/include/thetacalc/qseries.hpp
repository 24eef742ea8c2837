#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thetacalc/padic.hpp"

namespace thetacalc {

/// Truncated power series Σ_{k<M} c_k q^k over Z_p. Each coefficient keeps
/// its own digit precision; arithmetic truncates at the smaller q-precision.
class QSeries {
 public:
  QSeries(unsigned p, std::vector<PadicInt> coefficients);

  static QSeries zero(unsigned p, std::size_t M, int precision);
  static QSeries constant(unsigned p, std::size_t M, int precision, std::int64_t c);
  /// c q^k.
  static QSeries monomial(unsigned p, std::size_t M, int precision, std::size_t k, std::int64_t c = 1);
  static QSeries from_ints(unsigned p, const std::vector<std::int64_t>& cs, int precision);

  unsigned prime() const { return p_; }
  std::size_t q_precision() const { return c_.size(); }
  const std::vector<PadicInt>& coefficients() const { return c_; }
  const PadicInt& operator[](std::size_t k) const { return c_.at(k); }
  /// Minimum digit precision over all coefficients.
  int precision() const;

  QSeries operator-() const;
  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  QSeries pow(std::uint64_t e) const;
  QSeries scale(const PadicInt& c) const;
  QSeries truncate(std::size_t M) const;
  QSeries reduce_precision(int precision) const;
  /// Coefficientwise division by p^k; NotDivisible names the coefficient.
  QSeries exact_div_p(int k) const;

  /// Equal coefficient residues at each coefficient's common precision.
  bool congruent(const QSeries& other) const;
  /// Every coefficient agrees mod p^e.
  bool congruent_mod(const QSeries& other, int e) const;

  /// "[c_0, ..., c_{count-1}] mod p^P" with balanced coefficients.
  std::string render(std::size_t count) const;

 private:
  unsigned p_;
  std::vector<PadicInt> c_;
};

/// 1 + 240 Σ σ_3(n) q^n.
QSeries eisenstein_e4(unsigned p, std::size_t M, int precision);
/// 1 - 504 Σ σ_5(n) q^n.
QSeries eisenstein_e6(unsigned p, std::size_t M, int precision);
/// (E_4^3 - E_6^2) / 1728.
QSeries discriminant(unsigned p, std::size_t M, int precision);
/// Δ / E_4^3.
QSeries j_inverse(unsigned p, std::size_t M, int precision);

/// 1 / f for f with unit constant term.
QSeries series_inverse(const QSeries& f);

/// ψ^p on q-expansions: q |-> q^p. A series known to O(q^M) has an image
/// known to O(q^{pM}), so the q-precision is kept.
QSeries frobenius(const QSeries& f);

/// log f for c_0 in the padic_log domain and f / c_0 - 1 divisible by p
/// (by 4 when p = 2) coefficientwise; otherwise OutsideDomain.
QSeries log_one_unit(const QSeries& f);

/// b = -log(E) / log(g^w) with (E, g^w) = (E_4, 3^4) at p = 2 and
/// (E_6, 2^6) at p = 3. Coefficients are known mod p^precision.
QSeries b_series(unsigned p, std::size_t M, int precision);

/// f = ψ^p(b) - b.
QSeries f_series(unsigned p, std::size_t M, int precision);

/// θ(f) = (ψ^p(f) - f^p) / p, costing one digit.
QSeries theta_on_series(const QSeries& f);

/// d_0 .. d_{M-1} with Σ d_k base^k = target to q-precision M. The base must
/// be u q + O(q^2); u = 0 throws BaseNotInvertible and a failed division by a
/// non-unit u throws NotIntegral.
std::vector<PadicInt> express_in_base(const QSeries& target, const QSeries& base);

/// Σ d_k base^k, for base without constant term.
QSeries compose(const std::vector<PadicInt>& d, const QSeries& base);

}  // namespace thetacalc
