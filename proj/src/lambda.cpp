#include "thetacalc/lambda.hpp"

#include <map>

namespace thetacalc {

namespace {

std::uint64_t unit_part(unsigned p, std::uint64_t n) {
  while (n % p == 0) n /= p;
  return n;
}

PadicInt divide_by(const PadicInt& x, unsigned, std::uint64_t n) { return exact_div_int(x, n); }

ThetaElement divide_by(const ThetaElement& x, unsigned p, std::uint64_t n) {
  const SparsePoly shifted = x.value().exact_div_p(vp(p, n));
  const PadicInt u = PadicInt::from_residue(p, unit_part(p, n), shifted.floor_precision());
  return {x.presentation(), shifted.scale(unit_inverse(u))};
}

PadicInt one_like(const PadicInt& x) { return PadicInt::one(x.prime(), x.precision()); }
ThetaElement one_like(const ThetaElement& x) { return theta_constant(x.presentation(), 1); }

int precision_of(const PadicInt& x) { return x.precision(); }
int precision_of(const ThetaElement& x) { return x.value().precision(); }

unsigned prime_of(const PadicInt& x) { return x.prime(); }
unsigned prime_of(const ThetaElement& x) { return x.presentation()->prime(); }

template <class T, class Adams>
std::vector<T> newton(const T& x, unsigned n, Adams adams) {
  const unsigned p = prime_of(x);
  if (n > 0 && precision_of(x) <= vp_factorial(p, n)) {
    throw Error(ErrorKind::PrecisionExhausted, "λ^" + std::to_string(n) + " needs more than " +
                                                   std::to_string(precision_of(x)) + " digits");
  }
  std::vector<T> lams{one_like(x)};
  std::vector<T> psis;  // psis[i-1] = ψ^i(x)
  for (unsigned m = 1; m <= n; ++m) {
    psis.push_back(adams(m));
    T sum = lams[m - 1] * psis[0];
    for (unsigned i = 2; i <= m; ++i) {
      const T term = lams[m - i] * psis[i - 1];
      sum = (i % 2 == 1) ? sum + term : sum - term;
    }
    lams.push_back(divide_by(sum, p, m));
  }
  return lams;
}

template <class T>
T cartan(std::span<const T> xs, std::span<const T> ys, unsigned n) {
  if (xs.size() <= n || ys.size() <= n) {
    throw Error(ErrorKind::InsufficientInput, "Cartan product of degree " + std::to_string(n) + " needs " +
                                                  std::to_string(n + 1) + " λ-values per factor");
  }
  T sum = xs[0] * ys[n];
  for (unsigned i = 1; i <= n; ++i) sum = sum + xs[i] * ys[n - i];
  return sum;
}

}  // namespace

std::vector<PadicInt> lambda_sequence(const PadicInt& x, unsigned n) {
  return newton(x, n, [&](unsigned) { return x; });
}

std::vector<ThetaElement> lambda_sequence(const ThetaElement& x, unsigned n) {
  const unsigned p = x.presentation()->prime();
  std::map<int, ThetaElement> by_level{{0, x}};
  return newton(x, n, [&](unsigned m) {
    const int j = vp(p, m);
    auto it = by_level.find(j);
    if (it == by_level.end()) {
      ThetaElement prev = by_level.rbegin()->second;
      for (int l = by_level.rbegin()->first + 1; l <= j; ++l) {
        prev = psi_p(prev);
        by_level.emplace(l, prev);
      }
      it = by_level.find(j);
    }
    return it->second;
  });
}

PadicInt lambda_n(const PadicInt& x, unsigned n) { return lambda_sequence(x, n).back(); }

ThetaElement lambda_n(const ThetaElement& x, unsigned n) { return lambda_sequence(x, n).back(); }

PadicInt cartan_product(std::span<const PadicInt> lams_x, std::span<const PadicInt> lams_y, unsigned n) {
  return cartan(lams_x, lams_y, n);
}

ThetaElement cartan_product(std::span<const ThetaElement> lams_x, std::span<const ThetaElement> lams_y, unsigned n) {
  return cartan(lams_x, lams_y, n);
}

}  // namespace thetacalc
