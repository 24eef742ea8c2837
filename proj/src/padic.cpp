#include "thetacalc/padic.hpp"

#include <array>
#include <ostream>
#include <sstream>

namespace thetacalc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PrimeMismatch: return "PrimeMismatch";
    case ErrorKind::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorKind::PrecisionOverflow: return "PrecisionOverflow";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::CountExceedsPrecision: return "CountExceedsPrecision";
    case ErrorKind::RegistryMismatch: return "RegistryMismatch";
    case ErrorKind::UnassignedGenerator: return "UnassignedGenerator";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::LevelCapExceeded: return "LevelCapExceeded";
    case ErrorKind::IncompleteSampleWindow: return "IncompleteSampleWindow";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::BaseNotInvertible: return "BaseNotInvertible";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::InsufficientInput: return "InsufficientInput";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;

struct PowerTable {
  std::array<std::uint64_t, 64> powers{};
  int max = 0;
};

PowerTable build_table(unsigned p) {
  PowerTable t;
  t.powers[0] = 1;
  int k = 0;
  while (static_cast<u128>(t.powers[k]) * p < kLimit) {
    t.powers[k + 1] = t.powers[k] * p;
    ++k;
  }
  t.max = k;
  return t;
}

const PowerTable& table_for(unsigned p) {
  static const PowerTable t2 = build_table(2);
  static const PowerTable t3 = build_table(3);
  static const PowerTable t5 = build_table(5);
  switch (p) {
    case 2: return t2;
    case 3: return t3;
    case 5: return t5;
    default:
      throw Error(ErrorKind::UnsupportedPrime, "prime " + std::to_string(p) + " is not one of 2, 3, 5");
  }
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

void check_precision(unsigned p, int precision) {
  if (precision < 1) {
    throw Error(ErrorKind::PrecisionExhausted, "precision must be positive, got " + std::to_string(precision));
  }
  if (precision > table_for(p).max) {
    throw Error(ErrorKind::PrecisionOverflow, "p^" + std::to_string(precision) + " exceeds 63 bits at p=" +
                                                  std::to_string(p));
  }
}

}  // namespace

bool is_supported_prime(unsigned p) { return p == 2 || p == 3 || p == 5; }

int max_precision(unsigned p) { return table_for(p).max; }

std::uint64_t prime_power(unsigned p, int k) {
  const auto& t = table_for(p);
  if (k < 0 || k > t.max) {
    throw Error(ErrorKind::PrecisionOverflow, "p^" + std::to_string(k) + " out of range at p=" + std::to_string(p));
  }
  return t.powers[k];
}

int vp(unsigned p, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "v_p(0) is undefined");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int vp_factorial(unsigned p, std::uint64_t n) {
  int v = 0;
  while (n > 0) {
    n /= p;
    v += static_cast<int>(n);
  }
  return v;
}

PadicInt PadicInt::from_int(unsigned p, std::int64_t value, int precision) {
  check_precision(p, precision);
  const std::uint64_t m = prime_power(p, precision);
  std::int64_t r = value % static_cast<std::int64_t>(m);
  if (r < 0) r += static_cast<std::int64_t>(m);
  return PadicInt(p, static_cast<std::uint64_t>(r), precision);
}

PadicInt PadicInt::from_residue(unsigned p, std::uint64_t residue, int precision) {
  check_precision(p, precision);
  return PadicInt(p, residue % prime_power(p, precision), precision);
}

std::int64_t PadicInt::balanced() const {
  const std::uint64_t m = modulus();
  if (residue_ > m / 2) return -static_cast<std::int64_t>(m - residue_);
  return static_cast<std::int64_t>(residue_);
}

Valuation PadicInt::valuation() const {
  if (residue_ == 0) return {precision_, true};
  return {vp(prime_, residue_), false};
}

PadicInt PadicInt::reduce_to(int precision) const {
  if (precision > precision_) {
    throw Error(ErrorKind::PrecisionExhausted, "cannot raise precision from " + std::to_string(precision_) +
                                                   " to " + std::to_string(precision));
  }
  return from_residue(prime_, residue_, precision);
}

PadicInt PadicInt::mul_p_power(int k) const {
  const int target = std::min(precision_ + k, max_precision(prime_));
  const std::uint64_t m = prime_power(prime_, target);
  return PadicInt(prime_, mulmod(residue_, prime_power(prime_, std::min(k, target)), m), target);
}

PadicInt PadicInt::pow(std::uint64_t e) const {
  PadicInt result = one(prime_, precision_);
  PadicInt base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

bool PadicInt::congruent(const PadicInt& other) const {
  check_same_prime(other);
  const int prec = std::min(precision_, other.precision_);
  const std::uint64_t m = prime_power(prime_, prec);
  return residue_ % m == other.residue_ % m;
}

void PadicInt::check_same_prime(const PadicInt& o) const {
  if (prime_ != o.prime_) {
    throw Error(ErrorKind::PrimeMismatch, "p=" + std::to_string(prime_) + " vs p=" + std::to_string(o.prime_));
  }
}

PadicInt PadicInt::operator-() const {
  const std::uint64_t m = modulus();
  return PadicInt(prime_, residue_ == 0 ? 0 : m - residue_, precision_);
}

PadicInt& PadicInt::operator+=(const PadicInt& o) {
  check_same_prime(o);
  precision_ = std::min(precision_, o.precision_);
  const std::uint64_t m = modulus();
  residue_ = (residue_ % m + o.residue_ % m) % m;
  return *this;
}

PadicInt& PadicInt::operator-=(const PadicInt& o) {
  check_same_prime(o);
  precision_ = std::min(precision_, o.precision_);
  const std::uint64_t m = modulus();
  residue_ = (residue_ % m + (m - o.residue_ % m)) % m;
  return *this;
}

PadicInt& PadicInt::operator*=(const PadicInt& o) {
  check_same_prime(o);
  precision_ = std::min(precision_, o.precision_);
  residue_ = mulmod(residue_, o.residue_, modulus());
  return *this;
}

std::string PadicInt::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const PadicInt& x) {
  return os << x.balanced() << " + O(" << x.prime() << "^" << x.precision() << ")";
}

PadicInt exact_div_p(const PadicInt& x, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "negative division exponent");
  if (k == 0) return x;
  if (x.precision() <= k) {
    throw Error(ErrorKind::PrecisionExhausted,
                "dividing by p^" + std::to_string(k) + " needs more than " + std::to_string(x.precision()) + " digits");
  }
  const std::uint64_t pk = prime_power(x.prime(), k);
  if (x.residue() % pk != 0) {
    throw Error(ErrorKind::NotDivisible, x.to_string() + " is not divisible by " + std::to_string(x.prime()) + "^" +
                                             std::to_string(k));
  }
  return PadicInt::from_residue(x.prime(), x.residue() / pk, x.precision() - k);
}

PadicInt exact_div_int(const PadicInt& x, std::uint64_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
  const unsigned p = x.prime();
  const int v = vp(p, d);
  std::uint64_t unit = d;
  for (int i = 0; i < v; ++i) unit /= p;
  const PadicInt shifted = exact_div_p(x, v);
  return shifted * unit_inverse(PadicInt::from_residue(p, unit, shifted.precision()));
}

PadicInt unit_inverse(const PadicInt& x) {
  if (!x.is_unit()) throw Error(ErrorKind::NotAUnit, x.to_string());
  const std::uint64_t m = x.modulus();
  // Extended Euclid on signed 128-bit values.
  __int128 t = 0, new_t = 1;
  __int128 r = static_cast<__int128>(m), new_r = static_cast<__int128>(x.residue());
  while (new_r != 0) {
    const __int128 q = r / new_r;
    const __int128 tmp_t = t - q * new_t;
    t = new_t;
    new_t = tmp_t;
    const __int128 tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (t < 0) t += static_cast<__int128>(m);
  return PadicInt::from_residue(x.prime(), static_cast<std::uint64_t>(t), x.precision());
}

PadicInt teichmuller_lift(const PadicInt& x) {
  const unsigned p = x.prime();
  PadicInt t = PadicInt::from_residue(p, x.residue() % p, x.precision());
  if (t.is_zero()) return t;
  // r^(p^m) is stationary once m >= precision - 1.
  for (int m = 0; m < x.precision(); ++m) {
    PadicInt next = t.pow(p);
    if (next == t) break;
    t = next;
  }
  return t;
}

std::vector<PadicInt> teichmuller_digits(const PadicInt& x, int count) {
  if (count > x.precision()) {
    throw Error(ErrorKind::CountExceedsPrecision,
                std::to_string(count) + " digits requested from " + std::to_string(x.precision()) + " known");
  }
  const unsigned p = x.prime();
  std::vector<PadicInt> digits;
  digits.reserve(static_cast<std::size_t>(count));
  PadicInt rest = x;
  for (int i = 0; i < count; ++i) {
    PadicInt digit = teichmuller_lift(PadicInt::from_residue(p, rest.residue() % p, x.precision()));
    digits.push_back(digit);
    if (i + 1 < count) rest = exact_div_p(rest - digit.reduce_to(rest.precision()), 1);
  }
  return digits;
}

PadicInt padic_binomial(const PadicInt& x, std::uint64_t n) {
  const unsigned p = x.prime();
  if (n == 0) return PadicInt::one(p, x.precision());
  const int v = vp_factorial(p, n);
  if (x.precision() <= v) {
    throw Error(ErrorKind::PrecisionExhausted, "binom(x, " + std::to_string(n) + ") needs more than " +
                                                   std::to_string(v) + " digits");
  }
  PadicInt numerator = PadicInt::one(p, x.precision());
  PadicInt factorial_unit = PadicInt::one(p, x.precision());
  for (std::uint64_t i = 0; i < n; ++i) {
    numerator *= x - PadicInt::from_residue(p, i, x.precision());
    std::uint64_t k = i + 1;
    while (k % p == 0) k /= p;
    factorial_unit *= PadicInt::from_residue(p, k, x.precision());
  }
  const PadicInt shifted = exact_div_p(numerator, v);
  return shifted * unit_inverse(factorial_unit.reduce_to(shifted.precision()));
}

PadicInt padic_log(const PadicInt& x) {
  const unsigned p = x.prime();
  const int prec = x.precision();
  const PadicInt u = x - PadicInt::one(p, prec);
  if (u.is_zero()) return PadicInt::zero(p, prec);
  const int v = u.valuation().value;
  const int needed = p == 2 ? 2 : 1;
  if (v < needed) {
    throw Error(ErrorKind::OutsideDomain, "log needs x = 1 mod " + std::to_string(p == 2 ? 4 : p) + ", got " +
                                              x.to_string());
  }
  // log(1 + p^v w) = sum (-1)^(n-1) p^(nv - v_p(n)) w^n / (n / p^v_p(n)).
  const PadicInt w = exact_div_p(u, v);
  PadicInt sum = PadicInt::zero(p, prec);
  PadicInt w_power = PadicInt::one(p, w.precision());
  for (std::uint64_t n = 1;; ++n) {
    w_power *= w;
    int floor_log = 0;
    for (std::uint64_t t = n; t >= p; t /= p) ++floor_log;
    if (static_cast<int>(n) * v - floor_log >= prec) break;
    const int vn = vp(p, n);
    const int shift = static_cast<int>(n) * v - vn;
    if (shift >= prec) continue;
    std::uint64_t unit = n;
    for (int i = 0; i < vn; ++i) unit /= p;
    PadicInt term = w_power * unit_inverse(PadicInt::from_residue(p, unit, w_power.precision()));
    term = term.mul_p_power(shift).reduce_to(prec);
    if (n % 2 == 0) term = -term;
    sum += term;
  }
  return sum;
}

}  // namespace thetacalc
