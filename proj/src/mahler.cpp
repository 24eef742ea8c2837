#include "thetacalc/mahler.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "thetacalc/lambda.hpp"

namespace thetacalc {

namespace {

PadicInt residue_of(__int128 v, unsigned p, int N) {
  const auto m = static_cast<__int128>(prime_power(p, N));
  __int128 r = v % m;
  if (r < 0) r += m;
  return PadicInt::from_residue(p, static_cast<std::uint64_t>(r), N);
}

std::pair<int, __int128> split_valuation(__int128 v, unsigned p) {
  int a = 0;
  while (v % p == 0) {
    v /= p;
    ++a;
  }
  return {a, v};
}

int floor_log(unsigned p, std::size_t n) {
  int e = 0;
  for (std::size_t q = p; q <= n; q *= p) ++e;
  return e;
}

PadicInt lift_to(const PadicInt& c, int N) {
  if (c.precision() < N) {
    throw Error(ErrorKind::PrecisionExhausted,
                "coefficient " + c.to_string() + " is not known mod p^" + std::to_string(N));
  }
  return c.reduce_to(N);
}

void check_modulus(unsigned p, int N) {
  if (!is_supported_prime(p)) throw Error(ErrorKind::UnsupportedPrime, std::to_string(p));
  if (N < 1 || N > max_precision(p)) {
    throw Error(ErrorKind::PrecisionOverflow, "modulus p^" + std::to_string(N) + " at p = " + std::to_string(p));
  }
}

std::vector<PadicInt> differences(std::vector<PadicInt> a) {
  std::vector<PadicInt> out;
  out.reserve(a.size());
  while (!a.empty()) {
    out.push_back(a.front());
    for (std::size_t i = 0; i + 1 < a.size(); ++i) a[i] = a[i + 1] - a[i];
    a.pop_back();
  }
  return out;
}

std::string balanced_list(const std::vector<PadicInt>& cs) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < cs.size(); ++i) os << (i ? ", " : "") << cs[i].balanced();
  os << ']';
  return os.str();
}

void check_pair(const MahlerFn1& a, const MahlerFn1& b) {
  if (a.prime() != b.prime()) throw Error(ErrorKind::PrimeMismatch, "Mahler functions over different primes");
}

}  // namespace

std::vector<PadicInt> binomials_at(__int128 x, std::size_t count, unsigned p, int N) {
  std::vector<PadicInt> out;
  out.reserve(count);
  if (count == 0) return out;
  out.push_back(PadicInt::one(p, N));
  PadicInt unit = PadicInt::one(p, N);
  int v = 0;
  for (std::size_t k = 1; k < count; ++k) {
    const __int128 num = x - static_cast<__int128>(k) + 1;
    if (num == 0) {
      out.resize(count, PadicInt::zero(p, N));
      break;
    }
    const auto [a, nu] = split_valuation(num, p);
    const auto [b, du] = split_valuation(static_cast<__int128>(k), p);
    v += a - b;
    unit *= residue_of(nu, p, N) * unit_inverse(residue_of(du, p, N));
    out.push_back(v >= N ? PadicInt::zero(p, N) : unit.mul_p_power(v).reduce_to(N));
  }
  return out;
}

// ---------------------------------------------------------------- MahlerFn1

MahlerFn1::MahlerFn1(unsigned p, int N, std::vector<PadicInt> coefficients) : p_(p), N_(N) {
  check_modulus(p, N);
  c_.reserve(coefficients.size());
  for (const auto& c : coefficients) {
    if (c.prime() != p) throw Error(ErrorKind::PrimeMismatch, "Mahler coefficient " + c.to_string());
    c_.push_back(lift_to(c, N));
  }
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

MahlerFn1 MahlerFn1::constant(unsigned p, int N, std::int64_t c) {
  check_modulus(p, N);
  return {p, N, {PadicInt::from_int(p, c, N)}};
}

MahlerFn1 MahlerFn1::binomial(unsigned p, int N, std::size_t k) {
  check_modulus(p, N);
  std::vector<PadicInt> cs(k + 1, PadicInt::zero(p, N));
  cs[k] = PadicInt::one(p, N);
  return {p, N, std::move(cs)};
}

MahlerFn1 MahlerFn1::from_samples(std::span<const PadicInt> values, int N, unsigned verify_trailing) {
  if (values.empty()) throw Error(ErrorKind::InsufficientInput, "no samples");
  const unsigned p = values.front().prime();
  check_modulus(p, N);
  std::vector<PadicInt> vs;
  vs.reserve(values.size());
  for (const auto& v : values) vs.push_back(lift_to(v, N));
  std::vector<PadicInt> cs = differences(std::move(vs));
  const std::size_t checked = std::min<std::size_t>(verify_trailing, cs.size());
  for (std::size_t i = cs.size() - checked; i < cs.size(); ++i) {
    if (!cs[i].is_zero()) {
      throw Error(ErrorKind::IncompleteSampleWindow, "difference " + std::to_string(i) + " is " +
                                                          std::to_string(cs[i].balanced()) + " mod p^" +
                                                          std::to_string(N));
    }
  }
  return {p, N, std::move(cs)};
}

PadicInt MahlerFn1::coefficient(std::size_t k) const {
  return k < c_.size() ? c_[k] : PadicInt::zero(p_, N_);
}

MahlerFn1 MahlerFn1::operator-() const {
  std::vector<PadicInt> cs;
  for (const auto& c : c_) cs.push_back(-c);
  return {p_, N_, std::move(cs)};
}

MahlerFn1 operator+(const MahlerFn1& a, const MahlerFn1& b) {
  check_pair(a, b);
  const int N = std::min(a.N_, b.N_);
  std::vector<PadicInt> cs;
  for (std::size_t k = 0; k < std::max(a.length(), b.length()); ++k) {
    cs.push_back(a.coefficient(k).reduce_to(N) + b.coefficient(k).reduce_to(N));
  }
  return {a.p_, N, std::move(cs)};
}

MahlerFn1 operator-(const MahlerFn1& a, const MahlerFn1& b) { return a + (-b); }

MahlerFn1 MahlerFn1::scale(const PadicInt& c) const {
  const int N = std::min(N_, c.precision());
  std::vector<PadicInt> cs;
  for (const auto& x : c_) cs.push_back(x.reduce_to(N) * c.reduce_to(N));
  return {p_, N, std::move(cs)};
}

MahlerFn1 MahlerFn1::mul_p_power(int k) const {
  const int N = std::min(N_ + k, max_precision(p_));
  std::vector<PadicInt> cs;
  for (const auto& x : c_) cs.push_back(x.mul_p_power(k).reduce_to(N));
  return {p_, N, std::move(cs)};
}

MahlerFn1 MahlerFn1::exact_div_p(int k) const {
  if (k >= N_) throw Error(ErrorKind::PrecisionExhausted, "dividing by p^" + std::to_string(k) + " mod p^" + std::to_string(N_));
  std::vector<PadicInt> cs;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    try {
      cs.push_back(thetacalc::exact_div_p(c_[i], k));
    } catch (const Error& e) {
      throw Error(e.kind(), "Mahler coefficient " + std::to_string(i) + " of " + render() + ": " + e.what());
    }
  }
  return {p_, N_ - k, std::move(cs)};
}

MahlerFn1 MahlerFn1::reduce_to(int N) const {
  if (N > N_) throw Error(ErrorKind::PrecisionExhausted, "cannot raise modulus of " + render());
  return {p_, N, c_};
}

bool MahlerFn1::operator==(const MahlerFn1& other) const {
  if (p_ != other.p_ || N_ != other.N_ || c_.size() != other.c_.size()) return false;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].residue() != other.c_[i].residue()) return false;
  }
  return true;
}

std::string MahlerFn1::render() const {
  return balanced_list(c_) + " mod " + std::to_string(p_) + "^" + std::to_string(N_);
}

// ---------------------------------------------------------------- operations

std::vector<PadicInt> sample(const MahlerFn1& f, std::size_t count) {
  const unsigned p = f.prime();
  const int N = f.modulus_exponent();
  std::vector<PadicInt> d = f.coefficients();
  std::vector<PadicInt> out;
  out.reserve(count);
  for (std::size_t x = 0; x < count; ++x) {
    out.push_back(d.empty() ? PadicInt::zero(p, N) : d.front());
    for (std::size_t k = 0; k + 1 < d.size(); ++k) d[k] += d[k + 1];
  }
  return out;
}

namespace {

PadicInt evaluate_exact(const MahlerFn1& f, __int128 x) {
  const unsigned p = f.prime();
  const int N = f.modulus_exponent();
  const auto bs = binomials_at(x, f.length(), p, N);
  PadicInt sum = PadicInt::zero(p, N);
  for (std::size_t k = 0; k < bs.size(); ++k) sum += f.coefficients()[k] * bs[k];
  return sum;
}

int evaluation_precision(const MahlerFn1& f, int argument_precision) {
  const int loss = f.length() > 1 ? floor_log(f.prime(), f.length() - 1) : 0;
  const int prec = std::min(f.modulus_exponent(), argument_precision - loss);
  if (prec < 1) {
    throw Error(ErrorKind::PrecisionExhausted, "argument known to " + std::to_string(argument_precision) +
                                                   " digits cannot fix " + f.render());
  }
  return prec;
}

}  // namespace

PadicInt evaluate(const MahlerFn1& f, const PadicInt& x) {
  if (x.prime() != f.prime()) throw Error(ErrorKind::PrimeMismatch, "evaluation point " + x.to_string());
  const int prec = f.length() > 1 ? evaluation_precision(f, x.precision()) : f.modulus_exponent();
  return evaluate_exact(f, x.residue()).reduce_to(prec);
}

PadicInt evaluate(const MahlerFn1& f, std::int64_t x) { return evaluate_exact(f, x); }

MahlerFn1 multiply(const MahlerFn1& f, const MahlerFn1& g) {
  check_pair(f, g);
  const int N = std::min(f.modulus_exponent(), g.modulus_exponent());
  if (f.is_zero() || g.is_zero()) return MahlerFn1::zero(f.prime(), N);
  const std::size_t L = f.length() + g.length() - 1;
  auto a = sample(f, L);
  const auto b = sample(g, L);
  for (std::size_t i = 0; i < L; ++i) a[i] = a[i].reduce_to(N) * b[i].reduce_to(N);
  return MahlerFn1::from_samples(a, N, 0);
}

MahlerFn1 power(const MahlerFn1& f, std::uint64_t e) {
  MahlerFn1 result = MahlerFn1::constant(f.prime(), f.modulus_exponent(), 1);
  MahlerFn1 base = f;
  while (e > 0) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e > 0) base = multiply(base, base);
  }
  return result;
}

namespace {

MahlerFn1 translate_exact(const MahlerFn1& f, __int128 c) {
  if (f.length() <= 1) return f;
  std::vector<PadicInt> vs;
  vs.reserve(f.length());
  for (std::size_t x = 0; x < f.length(); ++x) vs.push_back(evaluate_exact(f, c + static_cast<__int128>(x)));
  return MahlerFn1::from_samples(vs, f.modulus_exponent(), 0);
}

}  // namespace

MahlerFn1 translate(const MahlerFn1& f, std::int64_t c) { return translate_exact(f, c); }

MahlerFn1 translate(const MahlerFn1& f, const PadicInt& c) {
  if (c.prime() != f.prime()) throw Error(ErrorKind::PrimeMismatch, "translation by " + c.to_string());
  if (f.length() <= 1) return f;
  return translate_exact(f, c.residue()).reduce_to(evaluation_precision(f, c.precision()));
}

// ---------------------------------------------------------------- MahlerFn2

MahlerFn2::MahlerFn2(unsigned p, int N, std::vector<std::vector<PadicInt>> coefficients) : p_(p), N_(N) {
  check_modulus(p, N);
  for (auto& row : coefficients) {
    std::vector<PadicInt> r;
    for (const auto& c : row) r.push_back(lift_to(c, N));
    c_.push_back(std::move(r));
  }
  trim();
}

void MahlerFn2::trim() {
  std::size_t rows = 0, cols = 0;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    for (std::size_t k = 0; k < c_[j].size(); ++k) {
      if (!c_[j][k].is_zero()) {
        rows = std::max(rows, j + 1);
        cols = std::max(cols, k + 1);
      }
    }
  }
  c_.resize(rows);
  for (auto& row : c_) row.resize(cols, PadicInt::zero(p_, N_));
}

MahlerFn2 MahlerFn2::from_grid(const std::vector<std::vector<PadicInt>>& values, unsigned p, int N) {
  check_modulus(p, N);
  std::vector<std::vector<PadicInt>> rows;
  const std::size_t R = values.size();
  const std::size_t C = R ? values.front().size() : 0;
  for (const auto& row : values) {
    if (row.size() != C) throw Error(ErrorKind::InvalidArgument, "ragged sample grid");
  }
  std::vector<std::vector<PadicInt>> byx(C);
  for (std::size_t y = 0; y < C; ++y) {
    std::vector<PadicInt> col;
    for (std::size_t x = 0; x < R; ++x) col.push_back(lift_to(values[x][y], N));
    byx[y] = differences(std::move(col));
  }
  for (std::size_t j = 0; j < R; ++j) {
    std::vector<PadicInt> row;
    for (std::size_t y = 0; y < C; ++y) row.push_back(byx[y][j]);
    rows.push_back(differences(std::move(row)));
  }
  return {p, N, std::move(rows)};
}

MahlerFn2 MahlerFn2::outer(const MahlerFn1& f, const MahlerFn1& g) {
  check_pair(f, g);
  const int N = std::min(f.modulus_exponent(), g.modulus_exponent());
  std::vector<std::vector<PadicInt>> cs;
  for (const auto& a : f.coefficients()) {
    std::vector<PadicInt> row;
    for (const auto& b : g.coefficients()) row.push_back(a.reduce_to(N) * b.reduce_to(N));
    cs.push_back(std::move(row));
  }
  return {f.prime(), N, std::move(cs)};
}

PadicInt MahlerFn2::coefficient(std::size_t j, std::size_t k) const {
  if (j < c_.size() && k < c_[j].size()) return c_[j][k];
  return PadicInt::zero(p_, N_);
}

MahlerFn2 operator+(const MahlerFn2& a, const MahlerFn2& b) {
  if (a.p_ != b.p_) throw Error(ErrorKind::PrimeMismatch, "Mahler functions over different primes");
  const int N = std::min(a.N_, b.N_);
  const std::size_t rows = std::max(a.c_.size(), b.c_.size());
  const std::size_t cols = std::max(a.c_.empty() ? 0 : a.c_[0].size(), b.c_.empty() ? 0 : b.c_[0].size());
  std::vector<std::vector<PadicInt>> cs(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t k = 0; k < cols; ++k) {
      cs[j].push_back(a.coefficient(j, k).reduce_to(N) + b.coefficient(j, k).reduce_to(N));
    }
  }
  return {a.p_, N, std::move(cs)};
}

MahlerFn2 MahlerFn2::scale(const PadicInt& c) const {
  const int N = std::min(N_, c.precision());
  auto cs = c_;
  for (auto& row : cs) {
    for (auto& x : row) x = x.reduce_to(N) * c.reduce_to(N);
  }
  return {p_, N, std::move(cs)};
}

bool MahlerFn2::operator==(const MahlerFn2& other) const {
  if (p_ != other.p_ || N_ != other.N_ || c_.size() != other.c_.size()) return false;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j].size() != other.c_[j].size()) return false;
    for (std::size_t k = 0; k < c_[j].size(); ++k) {
      if (c_[j][k].residue() != other.c_[j][k].residue()) return false;
    }
  }
  return true;
}

std::string MahlerFn2::render() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < c_.size(); ++j) os << (j ? ", " : "") << balanced_list(c_[j]);
  os << "] mod " << p_ << '^' << N_;
  return os.str();
}

PadicInt evaluate(const MahlerFn2& f, std::int64_t x, std::int64_t y) {
  const unsigned p = f.prime();
  const int N = f.modulus_exponent();
  const auto& cs = f.coefficients();
  PadicInt sum = PadicInt::zero(p, N);
  if (cs.empty()) return sum;
  const auto bx = binomials_at(x, cs.size(), p, N);
  const auto by = binomials_at(y, cs[0].size(), p, N);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    PadicInt row = PadicInt::zero(p, N);
    for (std::size_t k = 0; k < cs[j].size(); ++k) row += cs[j][k] * by[k];
    sum += bx[j] * row;
  }
  return sum;
}

// ---------------------------------------------------------------- Hopf structure

MahlerFn2 comultiply(const MahlerFn1& f) {
  const std::size_t L = std::max<std::size_t>(f.length(), 1);
  const auto s = sample(f, 2 * L - 1);
  std::vector<std::vector<PadicInt>> grid(L);
  for (std::size_t x = 0; x < L; ++x) {
    for (std::size_t y = 0; y < L; ++y) grid[x].push_back(s[x + y]);
  }
  return MahlerFn2::from_grid(grid, f.prime(), f.modulus_exponent());
}

MahlerFn1 antipode(const MahlerFn1& f) {
  if (f.length() <= 1) return f;
  std::vector<PadicInt> vs;
  for (std::size_t x = 0; x < f.length(); ++x) vs.push_back(evaluate_exact(f, -static_cast<__int128>(x)));
  return MahlerFn1::from_samples(vs, f.modulus_exponent(), 0);
}

HopfOps hopf_ops(const MahlerFn1& f) { return {comultiply(f), f.coefficient(0), antipode(f)}; }

// ---------------------------------------------------------------- π and s

MahlerFn1 pi_bn(unsigned n, unsigned p, int N) {
  static std::mutex mutex;
  static std::map<std::tuple<unsigned, int, unsigned>, MahlerFn1> cache;
  const auto key = std::make_tuple(p, N, n);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  check_modulus(p, N);
  const int M = N + static_cast<int>(n);
  if (M > max_precision(p)) {
    throw Error(ErrorKind::PrecisionOverflow, "π(b_" + std::to_string(n) + ") mod p^" + std::to_string(N) +
                                                  " needs " + std::to_string(M) + " digits");
  }
  MahlerFn1 result = MahlerFn1::identity(p, M);
  if (n > 0) {
    std::uint64_t e = p;
    for (int k = static_cast<int>(n) - 1; k >= 0; --k, e *= p) {
      const MahlerFn1 lower = pi_bn(static_cast<unsigned>(k), p, M - k);
      result = result - power(lower, e).mul_p_power(k);
    }
    result = result.exact_div_p(static_cast<int>(n));
  }
  std::lock_guard lock(mutex);
  return cache.emplace(key, result).first->second;
}

namespace {

/// π of a monomial restricted to one base, with memoized powers.
class MonomialPi {
 public:
  MonomialPi(const PresentationPtr& pres, int N) : pres_(pres), N_(N) {}

  MahlerFn1 of(const Monomial& m, const std::string& base) {
    MahlerFn1 acc = MahlerFn1::constant(pres_->prime(), N_, 1);
    for (const auto& f : m.factors()) {
      const auto where = pres_->locate(GeneratorId{f.gen});
      if (!where || where->first != base) continue;
      acc = multiply(acc, power_of(where->second, f.exp));
    }
    return acc;
  }

 private:
  const MahlerFn1& power_of(unsigned level, std::uint32_t e) {
    const auto key = std::make_pair(level, e);
    auto it = powers_.find(key);
    if (it == powers_.end()) it = powers_.emplace(key, power(pi_bn(level, pres_->prime(), N_), e)).first;
    return it->second;
  }

  PresentationPtr pres_;
  int N_;
  std::map<std::pair<unsigned, std::uint32_t>, MahlerFn1> powers_;
};

void check_bases(const ThetaElement& a, const std::vector<std::string>& bases) {
  for (const auto& [m, c] : a.value().terms()) {
    for (const auto& f : m.factors()) {
      const auto where = a.presentation()->locate(GeneratorId{f.gen});
      if (!where || std::find(bases.begin(), bases.end(), where->first) == bases.end()) {
        throw Error(ErrorKind::InvalidArgument,
                    "π is not defined on " + a.presentation()->registry()->label(GeneratorId{f.gen}));
      }
    }
  }
  if (a.value().precision() < 1) throw Error(ErrorKind::PrecisionExhausted, "element has no digits");
}

}  // namespace

MahlerFn1 pi_map(const ThetaElement& a, int N, const std::string& base) {
  check_bases(a, {base});
  if (a.presentation()->is_related(base)) throw Error(ErrorKind::InvalidArgument, "π needs a free base");
  if (a.value().floor_precision() < N) {
    throw Error(ErrorKind::PrecisionExhausted, "element known to " + std::to_string(a.value().floor_precision()) +
                                                   " digits, π wanted mod p^" + std::to_string(N));
  }
  MonomialPi pi(a.presentation(), N);
  MahlerFn1 sum = MahlerFn1::zero(a.presentation()->prime(), N);
  for (const auto& [m, c] : a.value().terms()) sum = sum + pi.of(m, base).scale(lift_to(c, N));
  return sum;
}

MahlerFn2 pi_map2(const ThetaElement& a, int N, const std::string& x_base, const std::string& y_base) {
  check_bases(a, {x_base, y_base});
  if (a.value().floor_precision() < N) {
    throw Error(ErrorKind::PrecisionExhausted, "element known to " + std::to_string(a.value().floor_precision()) +
                                                   " digits, π ⊗ π wanted mod p^" + std::to_string(N));
  }
  MonomialPi pi(a.presentation(), N);
  MahlerFn2 sum(a.presentation()->prime(), N, {});
  for (const auto& [m, c] : a.value().terms()) {
    sum = sum + MahlerFn2::outer(pi.of(m, x_base), pi.of(m, y_base)).scale(lift_to(c, N));
  }
  return sum;
}

namespace {

ThetaElement section_from(const MahlerFn1& f, const std::vector<ThetaElement>& lams) {
  ThetaElement sum = theta_constant(lams.front().presentation(), 0);
  for (std::size_t k = 0; k < f.length(); ++k) sum = sum + lams[k].scale(f.coefficients()[k]);
  return sum;
}

}  // namespace

ThetaElement section_s(const MahlerFn1& f, const PresentationPtr& presentation, const std::string& base) {
  if (f.prime() != presentation->prime()) throw Error(ErrorKind::PrimeMismatch, "section across primes");
  if (f.is_zero()) return theta_constant(presentation, 0);
  const auto lams = lambda_sequence(theta_generator(presentation, base), static_cast<unsigned>(f.length() - 1));
  return section_from(f, lams);
}

bool TensorImage::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](const ThetaElement& a) { return a.is_zero(); });
}

std::string TensorImage::render() const {
  std::string out;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + components[k].render() + ")⊗β_" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

TensorImage hopkins_mistake_image(unsigned n, const PresentationPtr& presentation, int N, ThetaElement* input) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "index must be positive");
  const auto lams = lambda_sequence(theta_generator(presentation, "b"), n);
  if (input) *input = lams[n];

  const Coproduct delta(presentation, "b", "b", "b'");
  const ThetaElement image = delta.apply(lams[n]);
  const auto& target = delta.target();

  // Group Δ(s(β_n)) = Σ L_{m'} ⊗ m' by right monomials m'.
  std::map<Monomial, SparsePoly> grouped;
  const SparsePoly zero = presentation->zero();
  for (const auto& [m, c] : image.value().terms()) {
    Monomial left, right;
    for (const auto& f : m.factors()) {
      const auto where = target->locate(GeneratorId{f.gen});
      const Monomial piece = Monomial::of(GeneratorId{f.gen}, f.exp);
      if (where && where->first == "b") left = left * piece;
      else right = right * piece;
    }
    auto it = grouped.try_emplace(right, zero).first;
    it->second += SparsePoly::monomial(presentation->registry(), left, c, presentation->options().degree_cap);
  }

  TensorImage out;
  MonomialPi pi(target, N);
  for (const auto& [right, left_poly] : grouped) {
    const ThetaElement L(presentation, left_poly);
    const MahlerFn1 piL = pi_map(L, N);
    const ThetaElement A = L - section_from(piL, lams);
    const MahlerFn1 piR = pi.of(right, "b'");
    for (std::size_t k = 0; k < piR.length(); ++k) {
      while (out.components.size() <= k) out.components.push_back(theta_constant(presentation, 0));
      out.components[k] = out.components[k] + A.scale(piR.coefficients()[k]);
    }
  }
  return out;
}

CheckResult hopkins_mistake_check(unsigned n, const PresentationPtr& presentation, int N) {
  ThetaElement input = theta_constant(presentation, 0);
  const TensorImage image = hopkins_mistake_image(n, presentation, N, &input);
  if (input.is_zero()) return CheckResult::fail("s(β_" + std::to_string(n) + ") vanished");
  if (!image.is_zero()) return CheckResult::fail("n=" + std::to_string(n) + " image " + image.render());
  return CheckResult::ok();
}

// ---------------------------------------------------------------- digits

RewriteSystem alpha_rules(const RegistryPtr& registry, unsigned p, unsigned m, int N) {
  std::vector<RewriteRule> rules;
  for (unsigned i = 0; i <= m; ++i) {
    const GeneratorId g = registry->intern("alpha", i);
    rules.push_back({g, p, SparsePoly::generator(registry, g, PadicInt::one(p, N))});
  }
  return RewriteSystem(std::move(rules));
}

namespace {

std::vector<PadicInt> teichmuller_nodes(unsigned p, int N) {
  std::vector<PadicInt> t;
  for (unsigned r = 0; r < p; ++r) t.push_back(teichmuller_lift(PadicInt::from_int(p, r, N)));
  return t;
}

/// Residues mod p of the Teichmüller digits of x, packed as Σ r_i p^i.
std::size_t digit_index(std::uint64_t x, unsigned p, unsigned digits) {
  const int prec = std::max<int>(static_cast<int>(digits), 1);
  const auto ds = teichmuller_digits(PadicInt::from_int(p, static_cast<std::int64_t>(x % prime_power(p, prec)), prec),
                                     static_cast<int>(digits));
  std::size_t idx = 0, stride = 1;
  for (const auto& d : ds) {
    idx += (d.residue() % p) * stride;
    stride *= p;
  }
  return idx;
}

/// Inverse of t_r^e (rows r, columns e) mod p^N by Gauss-Jordan.
std::vector<std::vector<PadicInt>> inverse_vandermonde(const std::vector<PadicInt>& t, unsigned p, int N) {
  const std::size_t n = t.size();
  std::vector<std::vector<PadicInt>> a(n), inv(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t e = 0; e < n; ++e) {
      a[r].push_back(e == 0 ? PadicInt::one(p, N) : t[r].pow(e));
      inv[r].push_back(PadicInt::from_int(p, r == e ? 1 : 0, N));
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (!a[piv][col].is_unit()) ++piv;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const PadicInt u = unit_inverse(a[col][col]);
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] *= u;
      inv[col][k] *= u;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const PadicInt factor = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= factor * a[col][k];
        inv[r][k] -= factor * inv[col][k];
      }
    }
  }
  return inv;
}

/// Applies `mat` along every axis of a p x ... x p tensor.
void apply_per_axis(std::vector<PadicInt>& tensor, const std::vector<std::vector<PadicInt>>& mat, unsigned p,
                    unsigned axes) {
  std::size_t stride = 1;
  for (unsigned axis = 0; axis < axes; ++axis, stride *= p) {
    std::vector<PadicInt> next = tensor;
    for (std::size_t idx = 0; idx < tensor.size(); ++idx) {
      const std::size_t digit = (idx / stride) % p;
      const std::size_t base = idx - digit * stride;
      PadicInt sum = PadicInt::zero(tensor[idx].prime(), tensor[idx].precision());
      for (std::size_t r = 0; r < p; ++r) sum += mat[digit][r] * tensor[base + r * stride];
      next[idx] = sum;
    }
    tensor = std::move(next);
  }
}

}  // namespace

SparsePoly to_alpha(const MahlerFn1& f, unsigned m, const RegistryPtr& registry) {
  const unsigned p = f.prime();
  const int N = f.modulus_exponent();
  const std::uint64_t period = prime_power(p, static_cast<int>(m) + 1);
  if (!(translate(f, static_cast<std::int64_t>(period)) == f)) {
    throw Error(ErrorKind::WindowTooSmall,
                f.render() + " does not have period " + std::to_string(p) + "^" + std::to_string(m + 1));
  }
  const auto values = sample(f, period);
  std::vector<PadicInt> tensor(period, PadicInt::zero(p, N));
  for (std::uint64_t x = 0; x < period; ++x) tensor[digit_index(x, p, m + 1)] = values[x];
  apply_per_axis(tensor, inverse_vandermonde(teichmuller_nodes(p, N), p, N), p, m + 1);

  std::vector<GeneratorId> gens;
  for (unsigned i = 0; i <= m; ++i) gens.push_back(registry->intern("alpha", i));
  SparsePoly out(registry, p, N);
  for (std::size_t idx = 0; idx < tensor.size(); ++idx) {
    if (tensor[idx].is_zero()) continue;
    Monomial mono;
    std::size_t rest = idx;
    for (unsigned i = 0; i <= m; ++i, rest /= p) {
      if (rest % p) mono = mono * Monomial::of(gens[i], static_cast<std::uint32_t>(rest % p));
    }
    out += SparsePoly::monomial(registry, mono, tensor[idx]);
  }
  return out;
}

MahlerFn1 from_alpha(const SparsePoly& a, int N) {
  const unsigned p = a.prime();
  check_modulus(p, N);
  if (a.precision() < N) throw Error(ErrorKind::PrecisionExhausted, "α-polynomial " + a.render());
  unsigned digits = 1;
  for (const GeneratorId g : a.generators()) {
    const Generator gen = a.registry()->at(g);
    if (gen.name != "alpha") throw Error(ErrorKind::InvalidArgument, "not a digit generator: " + a.registry()->label(g));
    digits = std::max(digits, gen.level + 1);
  }
  const std::size_t cells = prime_power(p, static_cast<int>(digits));
  const auto t = teichmuller_nodes(p, N);

  std::vector<PadicInt> table(cells, PadicInt::zero(p, N));
  for (std::size_t idx = 0; idx < cells; ++idx) {
    for (const auto& [m, c] : a.terms()) {
      PadicInt v = c.reduce_to(N);
      for (const auto& f : m.factors()) {
        const std::size_t r = (idx / prime_power(p, static_cast<int>(a.registry()->at(GeneratorId{f.gen}).level))) % p;
        v *= t[r].pow(f.exp);
      }
      table[idx] += v;
    }
  }
  const std::size_t L = static_cast<std::size_t>(N) * cells + 2;
  std::vector<PadicInt> values;
  values.reserve(L);
  for (std::size_t x = 0; x < L; ++x) values.push_back(table[digit_index(x, p, digits)]);
  return MahlerFn1::from_samples(values, N);
}

// ---------------------------------------------------------------- antidiagonal

CheckResult antidiagonal_check(unsigned n, unsigned p, int N, unsigned grid) {
  ThetaOptions opts;
  opts.prime = p;
  opts.level_cap = static_cast<unsigned>(floor_log(p, std::max(n, 1u))) + 2;
  opts.precision = N + static_cast<int>(opts.level_cap) + vp_factorial(p, n);
  if (opts.precision > max_precision(p)) {
    throw Error(ErrorKind::PrecisionOverflow, "antidiagonal check at n = " + std::to_string(n));
  }
  const auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b", "bbar"}, opts);
  const ThetaElement ell = theta_generator(pres, "b") - theta_generator(pres, "bbar");
  const MahlerFn2 F = pi_map2(lambda_n(ell, n), N, "b", "bbar");

  for (unsigned x = 0; x < grid; ++x) {
    for (unsigned y = 0; y < grid; ++y) {
      const auto xi = static_cast<std::int64_t>(x), yi = static_cast<std::int64_t>(y);
      const PadicInt got = evaluate(F, xi, yi);
      const PadicInt want = binomials_at(xi - yi, n + 1, p, N)[n];
      if (got.residue() != want.residue()) {
        return CheckResult::fail("n=" + std::to_string(n) + " at (" + std::to_string(x) + "," + std::to_string(y) +
                                 "): " + std::to_string(got.balanced()) + " != binom(x-y,n) = " +
                                 std::to_string(want.balanced()));
      }
      const PadicInt shifted = evaluate(F, 0, yi - xi);
      if (got.residue() != shifted.residue()) {
        return CheckResult::fail("n=" + std::to_string(n) + " f(" + std::to_string(x) + "," + std::to_string(y) +
                                 ") != f(0," + std::to_string(yi - xi) + ")");
      }
    }
  }
  return CheckResult::ok();
}

}  // namespace thetacalc
