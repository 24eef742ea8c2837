#include "thetacalc/qseries.hpp"

#include <algorithm>
#include <sstream>

namespace thetacalc {

namespace {

std::int64_t divisor_power_sum(std::int64_t n, unsigned k) {
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    std::int64_t t = 1;
    for (unsigned i = 0; i < k; ++i) t *= d;
    s += t;
  }
  return s;
}

QSeries eisenstein(unsigned p, std::size_t M, int precision, std::int64_t scale, unsigned k) {
  if (M < 2) throw Error(ErrorKind::InvalidArgument, "q-precision must be at least 2");
  std::vector<PadicInt> cs{PadicInt::one(p, precision)};
  const PadicInt s = PadicInt::from_int(p, scale, precision);
  for (std::size_t n = 1; n < M; ++n) {
    cs.push_back(s * PadicInt::from_int(p, divisor_power_sum(static_cast<std::int64_t>(n), k), precision));
  }
  return {p, std::move(cs)};
}

int valuation_floor(const PadicInt& x) { return x.valuation().value; }

QSeries with_constant(const QSeries& f, const PadicInt& c) {
  auto cs = f.coefficients();
  cs[0] = c;
  return {f.prime(), std::move(cs)};
}

}  // namespace

QSeries::QSeries(unsigned p, std::vector<PadicInt> coefficients) : p_(p), c_(std::move(coefficients)) {
  if (c_.empty()) throw Error(ErrorKind::InvalidArgument, "series needs at least one coefficient");
  for (const auto& c : c_) {
    if (c.prime() != p) throw Error(ErrorKind::PrimeMismatch, "series coefficient " + c.to_string());
  }
}

QSeries QSeries::zero(unsigned p, std::size_t M, int precision) {
  return {p, std::vector<PadicInt>(M, PadicInt::zero(p, precision))};
}

QSeries QSeries::constant(unsigned p, std::size_t M, int precision, std::int64_t c) {
  return monomial(p, M, precision, 0, c);
}

QSeries QSeries::monomial(unsigned p, std::size_t M, int precision, std::size_t k, std::int64_t c) {
  QSeries out = zero(p, M, precision);
  if (k < M) out.c_[k] = PadicInt::from_int(p, c, precision);
  return out;
}

QSeries QSeries::from_ints(unsigned p, const std::vector<std::int64_t>& cs, int precision) {
  std::vector<PadicInt> v;
  for (auto c : cs) v.push_back(PadicInt::from_int(p, c, precision));
  return {p, std::move(v)};
}

int QSeries::precision() const {
  int m = c_.front().precision();
  for (const auto& c : c_) m = std::min(m, c.precision());
  return m;
}

QSeries QSeries::operator-() const {
  auto cs = c_;
  for (auto& c : cs) c = -c;
  return {p_, std::move(cs)};
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  const std::size_t M = std::min(a.q_precision(), b.q_precision());
  std::vector<PadicInt> cs;
  for (std::size_t k = 0; k < M; ++k) cs.push_back(a.c_[k] + b.c_[k]);
  return {a.p_, std::move(cs)};
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a, const QSeries& b) {
  const std::size_t M = std::min(a.q_precision(), b.q_precision());
  std::vector<PadicInt> cs;
  cs.reserve(M);
  for (std::size_t k = 0; k < M; ++k) {
    PadicInt s = a.c_[0] * b.c_[k];
    for (std::size_t i = 1; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
    cs.push_back(s);
  }
  return {a.p_, std::move(cs)};
}

QSeries QSeries::pow(std::uint64_t e) const {
  QSeries result = constant(p_, c_.size(), precision(), 1);
  QSeries base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

QSeries QSeries::scale(const PadicInt& c) const {
  auto cs = c_;
  for (auto& x : cs) x *= c;
  return {p_, std::move(cs)};
}

QSeries QSeries::truncate(std::size_t M) const {
  if (M > c_.size()) throw Error(ErrorKind::PrecisionExhausted, "series known only to O(q^" + std::to_string(c_.size()) + ")");
  return {p_, std::vector<PadicInt>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(M))};
}

QSeries QSeries::reduce_precision(int precision) const {
  auto cs = c_;
  for (auto& x : cs) x = x.reduce_to(std::min(precision, x.precision()));
  return {p_, std::move(cs)};
}

QSeries QSeries::exact_div_p(int k) const {
  std::vector<PadicInt> cs;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    try {
      cs.push_back(thetacalc::exact_div_p(c_[i], k));
    } catch (const Error& e) {
      throw Error(e.kind(), "coefficient of q^" + std::to_string(i) + ": " + e.what());
    }
  }
  return {p_, std::move(cs)};
}

bool QSeries::congruent(const QSeries& other) const {
  const std::size_t M = std::min(c_.size(), other.c_.size());
  for (std::size_t k = 0; k < M; ++k) {
    if (!c_[k].congruent(other.c_[k])) return false;
  }
  return true;
}

bool QSeries::congruent_mod(const QSeries& other, int e) const {
  const std::size_t M = std::min(c_.size(), other.c_.size());
  for (std::size_t k = 0; k < M; ++k) {
    if (c_[k].precision() < e || other.c_[k].precision() < e) {
      throw Error(ErrorKind::PrecisionExhausted, "comparison mod p^" + std::to_string(e) + " at q^" + std::to_string(k));
    }
    if (c_[k].reduce_to(e) != other.c_[k].reduce_to(e)) return false;
  }
  return true;
}

std::string QSeries::render(std::size_t count) const {
  count = std::min(count, c_.size());
  int prec = c_.front().precision();
  for (std::size_t k = 0; k < count; ++k) prec = std::min(prec, c_[k].precision());
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < count; ++k) os << (k ? ", " : "") << c_[k].reduce_to(prec).balanced();
  os << "] mod " << p_ << '^' << prec;
  return os.str();
}

// ---------------------------------------------------------------- modular forms

QSeries eisenstein_e4(unsigned p, std::size_t M, int precision) { return eisenstein(p, M, precision, 240, 3); }

QSeries eisenstein_e6(unsigned p, std::size_t M, int precision) { return eisenstein(p, M, precision, -504, 5); }

QSeries discriminant(unsigned p, std::size_t M, int precision) {
  const int extra = vp(p, 1728);
  const int hi = precision + extra;
  if (hi > max_precision(p)) throw Error(ErrorKind::PrecisionOverflow, "Δ at " + std::to_string(precision) + " digits");
  const QSeries e4 = eisenstein_e4(p, M, hi);
  const QSeries e6 = eisenstein_e6(p, M, hi);
  const QSeries num = e4.pow(3) - e6.pow(2);
  std::vector<PadicInt> cs;
  for (std::size_t k = 0; k < M; ++k) {
    try {
      cs.push_back(exact_div_int(num[k], 1728).reduce_to(precision));
    } catch (const Error& e) {
      throw Error(e.kind(), "1728 Δ at q^" + std::to_string(k) + ": " + e.what());
    }
  }
  return {p, std::move(cs)};
}

QSeries j_inverse(unsigned p, std::size_t M, int precision) {
  return discriminant(p, M, precision) * series_inverse(eisenstein_e4(p, M, precision).pow(3));
}

QSeries series_inverse(const QSeries& f) {
  const PadicInt u = unit_inverse(f[0]);
  std::vector<PadicInt> g{u};
  for (std::size_t k = 1; k < f.q_precision(); ++k) {
    PadicInt s = PadicInt::zero(f.prime(), u.precision());
    for (std::size_t i = 1; i <= k; ++i) s += f[i] * g[k - i];
    g.push_back(-(s * u));
  }
  return {f.prime(), std::move(g)};
}

QSeries frobenius(const QSeries& f) {
  const unsigned p = f.prime();
  const std::size_t M = f.q_precision();
  std::vector<PadicInt> cs(M, PadicInt::zero(p, f.precision()));
  for (std::size_t n = 0; n * p < M; ++n) cs[n * p] = f[n];
  return {p, std::move(cs)};
}

QSeries log_one_unit(const QSeries& f) {
  const unsigned p = f.prime();
  const std::size_t M = f.q_precision();
  const int P = f.precision();
  const PadicInt log_c0 = padic_log(f[0].reduce_to(P));
  const QSeries u = f.reduce_precision(P).scale(unit_inverse(f[0].reduce_to(P))) - QSeries::constant(p, M, P, 1);
  const int need = p == 2 ? 2 : 1;
  int v = P;
  for (std::size_t k = 1; k < M; ++k) {
    const int vk = valuation_floor(u[k]);
    if (vk < need) {
      throw Error(ErrorKind::OutsideDomain, "coefficient of q^" + std::to_string(k) + " of f/c_0 - 1 is " +
                                                u[k].to_string() + ", valuation below " + std::to_string(need));
    }
    v = std::min(v, vk);
  }
  QSeries sum = QSeries::zero(p, M, P);
  if (v < P) {
    // u = p^v w; the n-th term is (-1)^{n+1} p^{nv - v_p(n)} w^n / unit(n).
    const QSeries w = u.exact_div_p(v);
    QSeries wn = w;
    for (std::size_t n = 1; n < M; ++n, wn = wn * w) {
      const int shift = static_cast<int>(n) * v - vp(p, n);
      if (shift >= P) continue;
      std::uint64_t unit = n;
      while (unit % p == 0) unit /= p;
      QSeries term = wn.scale(unit_inverse(PadicInt::from_int(p, static_cast<std::int64_t>(unit), P - v)));
      std::vector<PadicInt> cs;
      for (const auto& c : term.coefficients()) cs.push_back(c.mul_p_power(shift).reduce_to(P));
      term = QSeries(p, std::move(cs));
      sum = (n % 2 == 1) ? sum + term : sum - term;
    }
  }
  return with_constant(sum, sum[0] + log_c0);
}

QSeries b_series(unsigned p, std::size_t M, int precision) {
  if (p != 2 && p != 3) throw Error(ErrorKind::UnsupportedPrime, "b(q) is defined at p = 2, 3");
  const std::int64_t gw = p == 2 ? 81 : 64;
  const int vl = vp(p, static_cast<std::uint64_t>(gw - 1));
  const int hi = precision + vl;
  if (hi > max_precision(p)) throw Error(ErrorKind::PrecisionOverflow, "b(q) at " + std::to_string(precision) + " digits");
  const QSeries E = p == 2 ? eisenstein_e4(p, M, hi) : eisenstein_e6(p, M, hi);
  for (std::size_t k = 1; k < M; ++k) {
    if (valuation_floor(E[k]) < vl) {
      throw Error(ErrorKind::OutsideDomain, "E at q^" + std::to_string(k) + " is not 0 mod p^" + std::to_string(vl));
    }
  }
  const PadicInt L = padic_log(PadicInt::from_int(p, gw, hi));
  const PadicInt unit = unit_inverse(exact_div_p(L, vl));
  return (-log_one_unit(E)).exact_div_p(vl).scale(unit).reduce_precision(precision);
}

QSeries f_series(unsigned p, std::size_t M, int precision) {
  const QSeries b = b_series(p, M, precision);
  return frobenius(b) - b;
}

QSeries theta_on_series(const QSeries& f) {
  return (frobenius(f) - f.pow(f.prime())).exact_div_p(1);
}

// ---------------------------------------------------------------- re-expansion

std::vector<PadicInt> express_in_base(const QSeries& target, const QSeries& base) {
  const unsigned p = target.prime();
  const std::size_t M = std::min(target.q_precision(), base.q_precision());
  if (M < 2) throw Error(ErrorKind::InvalidArgument, "re-expansion needs q-precision at least 2");
  if (!base[0].is_zero()) throw Error(ErrorKind::BaseNotInvertible, "base has constant term " + base[0].to_string());
  const PadicInt u = base[1];
  if (u.is_zero()) throw Error(ErrorKind::BaseNotInvertible, "base has no linear term");
  const int vu = valuation_floor(u);
  const PadicInt u_unit = unit_inverse(exact_div_p(u, vu));

  QSeries residual = target.truncate(M);
  const QSeries b = base.truncate(M);
  std::vector<PadicInt> d{residual[0]};
  residual = with_constant(residual, PadicInt::zero(p, residual[0].precision()));
  QSeries bk = b;
  PadicInt uk_unit = u_unit;
  for (std::size_t k = 1; k < M; ++k) {
    PadicInt dk = residual[k];
    const int shift = static_cast<int>(k) * vu;
    if (shift > 0) {
      try {
        dk = exact_div_p(dk, shift);
      } catch (const Error& e) {
        throw Error(ErrorKind::NotIntegral, "d_" + std::to_string(k) + " = " + residual[k].to_string() + " / " +
                                                u.to_string() + "^" + std::to_string(k) + ": " + e.what());
      }
    }
    dk *= uk_unit;
    d.push_back(dk);
    residual = residual - bk.scale(dk);
    bk = bk * b;
    uk_unit *= u_unit;
  }
  return d;
}

QSeries compose(const std::vector<PadicInt>& d, const QSeries& base) {
  const unsigned p = base.prime();
  const std::size_t M = base.q_precision();
  if (!base[0].is_zero()) throw Error(ErrorKind::InvalidArgument, "composition needs a base without constant term");
  std::vector<PadicInt> cs(M, PadicInt::zero(p, base.precision()));
  if (!d.empty()) cs[0] = d[0];
  QSeries sum(p, std::move(cs));
  QSeries bk = base;
  for (std::size_t k = 1; k < std::min(d.size(), M); ++k) {
    sum = sum + bk.scale(d[k]);
    bk = bk * base;
  }
  return sum;
}

}  // namespace thetacalc
