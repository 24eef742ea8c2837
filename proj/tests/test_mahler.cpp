#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "thetacalc/lambda.hpp"
#include "thetacalc/mahler.hpp"

using namespace thetacalc;
using boost::multiprecision::cpp_int;

namespace {

// Exact finite differences of integer samples, reduced mod p^N.
std::vector<std::int64_t> difference_oracle(std::vector<cpp_int> v, unsigned p, int N) {
  const cpp_int m = cpp_int(prime_power(p, N));
  std::vector<std::int64_t> out;
  while (!v.empty()) {
    cpp_int r = v.front() % m;
    if (r < 0) r += m;
    if (r > m / 2) r -= m;
    out.push_back(static_cast<std::int64_t>(r));
    for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
    v.pop_back();
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

std::vector<std::int64_t> balanced(const MahlerFn1& f) {
  std::vector<std::int64_t> out;
  for (const auto& c : f.coefficients()) out.push_back(c.balanced());
  return out;
}

cpp_int binom_oracle(std::int64_t x, unsigned k) {
  cpp_int num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= cpp_int(x) - i;
    den *= i + 1;
  }
  return num / den;
}

// π(b_n)(x) over the integers from the ghost identity.
cpp_int pi_oracle(unsigned n, unsigned p, std::int64_t x) {
  std::vector<cpp_int> v{cpp_int(x)};
  for (unsigned j = 1; j <= n; ++j) {
    cpp_int rhs = x;
    cpp_int pk = 1;
    for (unsigned k = 0; k < j; ++k, pk *= p) rhs -= pk * boost::multiprecision::pow(v[k], static_cast<unsigned>(std::pow(p, j - k)));
    v.push_back(rhs / pk);
  }
  return v[n];
}

MahlerFn1 random_fn(std::mt19937_64& rng, unsigned p, int N, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::uint64_t> c(0, prime_power(p, N) - 1);
  std::vector<PadicInt> cs;
  for (std::size_t i = len(rng); i > 0; --i) cs.push_back(PadicInt::from_residue(p, c(rng), N));
  return {p, N, cs};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("mahler coefficients from samples") {
  std::vector<PadicInt> sq;
  for (std::int64_t x = 0; x <= 4; ++x) sq.push_back(PadicInt::from_int(3, x * x, 8));
  const auto f = MahlerFn1::from_samples(sq, 8);
  CHECK(balanced(f) == std::vector<std::int64_t>{0, 1, 2});
  for (std::int64_t x = 0; x <= 4; ++x) CHECK(evaluate(f, x) == sq[static_cast<std::size_t>(x)]);

  const std::vector<PadicInt> ones(3, PadicInt::one(2, 5));
  CHECK(balanced(MahlerFn1::from_samples(ones, 5)) == std::vector<std::int64_t>{1});

  const auto b3 = MahlerFn1::binomial(5, 6, 3);
  CHECK(MahlerFn1::from_samples(sample(b3, 6), 6) == b3);
  CHECK(balanced(b3) == std::vector<std::int64_t>{0, 0, 0, 1});

  std::vector<PadicInt> cube;
  for (std::int64_t x = 0; x <= 3; ++x) cube.push_back(PadicInt::from_int(2, x * x * x, 8));
  CHECK_THROWS_AS(MahlerFn1::from_samples(cube, 8), Error);
}

TEST_CASE("binomials at integers") {
  for (unsigned p : {2u, 3u, 5u}) {
    for (std::int64_t x : {-9, -1, 0, 3, 17, 40}) {
      const auto bs = binomials_at(x, 12, p, 9);
      for (unsigned k = 0; k < 12; ++k) {
        CHECK(bs[k] == PadicInt::from_int(p, static_cast<std::int64_t>(binom_oracle(x, k) % cpp_int(prime_power(p, 9))), 9));
      }
    }
  }
}

TEST_CASE("mahler arithmetic examples") {
  const unsigned p = 2;
  const int N = 10;
  const auto b1 = MahlerFn1::binomial(p, N, 1);
  const auto b2 = MahlerFn1::binomial(p, N, 2);
  CHECK(multiply(b1, b1) == b1 + b2.scale(PadicInt::from_int(p, 2, N)));
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(translate(MahlerFn1::binomial(p, N, n), 1) ==
          MahlerFn1::binomial(p, N, n) + MahlerFn1::binomial(p, N, n - 1));
  }
  MahlerFn1 f = b1;
  for (int k = 1; k <= 5; ++k) {
    f = translate(f, 1);
    CHECK(f == b1 + MahlerFn1::constant(p, N, k));
  }
  CHECK(evaluate(b2, PadicInt::from_int(p, 5, N)).residue() == 10);
  CHECK(evaluate(b2, PadicInt::from_int(p, 5, N)).precision() == N - 1);
  CHECK(evaluate(b2, -3).residue() == 6);
  CHECK(MahlerFn1::binomial(2, 6, 3).render() == "[0, 0, 0, 1] mod 2^6");
  CHECK(MahlerFn1::zero(3, 4).render() == "[] mod 3^4");
}

TEST_CASE("mahler randomized properties") {
  std::mt19937_64 rng(7);
  for (unsigned p : {2u, 3u, 5u}) {
    const int N = 8;
    std::uniform_int_distribution<std::int64_t> point(-50, 1000);
    std::uniform_int_distribution<std::uint64_t> big(0, prime_power(p, 20) - 1);
    for (int trial = 0; trial < 67; ++trial) {
      const auto f = random_fn(rng, p, N, 12);
      const auto g = random_fn(rng, p, N, 8);
      CHECK(MahlerFn1::from_samples(sample(f, f.length() + 3), N) == f);

      const auto fg = multiply(f, g);
      for (int i = 0; i < 20; ++i) {
        const PadicInt x = PadicInt::from_residue(p, big(rng), 20);
        CHECK(evaluate(fg, x) == evaluate(f, x).reduce_to(N) * evaluate(g, x).reduce_to(N));
      }

      const std::int64_t c = point(rng);
      CHECK(translate(translate(f, c), -c) == f);
      CHECK(translate(translate(f, 1), -1) == f);
      CHECK(evaluate(translate(f, c), 3) == evaluate(f, c + 3));
    }
  }
}

TEST_CASE("hopf structure") {
  const unsigned p = 3;
  const int N = 7;
  for (std::size_t n = 0; n <= 6; ++n) {
    const auto bn = MahlerFn1::binomial(p, N, n);
    MahlerFn2 expect(p, N, {});
    for (std::size_t i = 0; i <= n; ++i) {
      expect = expect + MahlerFn2::outer(MahlerFn1::binomial(p, N, i), MahlerFn1::binomial(p, N, n - i));
    }
    const auto ops = hopf_ops(bn);
    CHECK(ops.coproduct == expect);
    CHECK(ops.counit.residue() == (n == 0 ? 1u : 0u));
  }
  CHECK(antipode(MahlerFn1::identity(p, N)) == -MahlerFn1::identity(p, N));

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_fn(rng, p, N, 9);
    const auto ops = hopf_ops(f);
    for (std::int64_t x = -3; x <= 5; ++x) {
      CHECK(evaluate(ops.coproduct, x, 0) == evaluate(f, x));
      CHECK(evaluate(ops.coproduct, -x, x) == ops.counit);
      CHECK(evaluate(ops.antipode, x) == evaluate(f, -x));
      for (std::int64_t y = 0; y <= 4; ++y) {
        CHECK(evaluate(ops.coproduct, x, y) == evaluate(f, x + y));
        for (std::int64_t z = 0; z <= 2; ++z) {
          CHECK(evaluate(comultiply(f), x + y, z) == evaluate(comultiply(f), x, y + z));
        }
      }
    }
  }
}

TEST_CASE("pi on the generators") {
  CHECK(pi_bn(0, 2, 8) == MahlerFn1::identity(2, 8));
  CHECK(balanced(pi_bn(1, 2, 8)) == std::vector<std::int64_t>{0, 0, -1});
  for (unsigned p : {2u, 3u}) {
    const int N = 8;
    for (unsigned n = 0; n <= 3; ++n) {
      const std::size_t L = static_cast<std::size_t>(std::pow(p, n)) + 3;
      std::vector<cpp_int> vs;
      for (std::size_t x = 0; x < L; ++x) vs.push_back(pi_oracle(n, p, static_cast<std::int64_t>(x)));
      CHECK(balanced(pi_bn(n, p, N)) == difference_oracle(vs, p, N));
    }
  }
  CHECK(pi_bn(2, 2, 8).render() + "\n" == slurp(THETACALC_GOLDEN_DIR "/mahler_pi_b2_p2_N8.golden"));
}

TEST_CASE("pi on free theta algebras") {
  for (unsigned p : {2u, 3u}) {
    const int N = 8;
    ThetaOptions opts{p, 5, std::nullopt, N + 5 + vp_factorial(p, 6)};
    auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, opts);
    const auto b = theta_generator(pres, "b");
    CHECK(pi_map(theta_constant(pres, 1), N) == MahlerFn1::constant(p, N, 1));
    CHECK(pi_map(psi_p(b) - b, N).is_zero());
    for (unsigned n = 0; n <= 3; ++n) {
      const auto bn = theta_generator(pres, "b", n);
      CHECK(pi_map(psi_p(bn) - bn, N).is_zero());
    }
    const auto lams = lambda_sequence(b, 6);
    for (std::size_t k = 0; k <= 6; ++k) CHECK(pi_map(lams[k], N) == MahlerFn1::binomial(p, N, k));
  }

  std::mt19937_64 rng(9);
  for (unsigned p : {2u, 3u}) {
    const int N = 6;
    auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, ThetaOptions{p, 3, std::nullopt, 12});
    std::uniform_int_distribution<std::int64_t> c(-5, 5);
    std::uniform_int_distribution<unsigned> e(0, 2);
    auto rand_el = [&] {
      ThetaElement a = theta_constant(pres, c(rng));
      for (int t = 0; t < 3; ++t) {
        ThetaElement m = theta_constant(pres, c(rng));
        for (unsigned lvl = 0; lvl < 3; ++lvl) m = m * theta_generator(pres, "b", lvl).pow(e(rng));
        a = a + m;
      }
      return a;
    };
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = rand_el();
      const auto bb = rand_el();
      CHECK(pi_map(a * bb, N) == multiply(pi_map(a, N), pi_map(bb, N)));
      CHECK(pi_map(a + bb, N) == pi_map(a, N) + pi_map(bb, N));
    }
  }
}

TEST_CASE("section s") {
  auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, ThetaOptions{2, 4, 24u, 22});
  const int N = 10;
  CHECK(section_s(MahlerFn1::binomial(2, N, 0), pres).equals(theta_constant(pres, 1)));
  CHECK(section_s(MahlerFn1::binomial(2, N, 1), pres).equals(theta_generator(pres, "b")));
  CHECK(section_s(MahlerFn1::binomial(2, N, 2), pres).equals(-theta_generator(pres, "b", 1)));

  std::mt19937_64 rng(10);
  for (unsigned p : {2u, 3u}) {
    auto pr = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, ThetaOptions{p, 4, 24u, 22});
    for (int trial = 0; trial < 15; ++trial) {
      const auto f = random_fn(rng, p, N, 8);
      CHECK(pi_map(section_s(f, pr), N) == f);
    }
  }
}

TEST_CASE("hopkins mistake") {
  const int N = 6;
  for (unsigned p : {2u, 3u}) {
    ThetaOptions opts{p, p == 2 ? 4u : 3u, 24u, 0};
    opts.precision = N + guard_digits(opts);
    auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, opts);
    for (unsigned n = 1; n <= 6; ++n) {
      ThetaElement input = theta_constant(pres, 0);
      const auto image = hopkins_mistake_image(n, pres, N, &input);
      CHECK_MESSAGE(image.is_zero(), image.render());
      CHECK_FALSE(input.is_zero());
      CHECK(hopkins_mistake_check(n, pres, N).pass);
    }
  }
  auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, ThetaOptions{2, 4, 24u, 20});
  ThetaElement input = theta_constant(pres, 0);
  CHECK(hopkins_mistake_image(1, pres, N, &input).render() == "0");
  CHECK(input.equals(theta_generator(pres, "b")));
}

TEST_CASE("teichmuller digit basis") {
  for (unsigned p : {2u, 3u}) {
    const int N = p == 2 ? 5 : 3;
    auto reg = std::make_shared<Registry>();
    const auto m = static_cast<unsigned>(N - 1);
    const auto a = to_alpha(MahlerFn1::identity(p, N), m, reg);
    SparsePoly expect(reg, p, N);
    for (unsigned i = 0; i <= m; ++i) {
      expect += SparsePoly::generator(reg, reg->intern("alpha", i), PadicInt::one(p, N)).mul_p_power(static_cast<int>(i)).reduce_precision(N);
    }
    CHECK(a.equals(expect));
    CHECK(from_alpha(expect, N) == MahlerFn1::identity(p, N));

    CHECK(to_alpha(MahlerFn1::constant(p, N, 1), 0, reg).equals(SparsePoly::constant(reg, PadicInt::one(p, N))));
    CHECK(from_alpha(SparsePoly::constant(reg, PadicInt::one(p, N)), N) == MahlerFn1::constant(p, N, 1));
    CHECK_THROWS_AS(to_alpha(MahlerFn1::identity(p, N), m - 1, reg), Error);
  }

  auto reg = std::make_shared<Registry>();
  const int N = 8;
  const auto alpha0 = SparsePoly::generator(reg, reg->intern("alpha", 0), PadicInt::one(2, N));
  std::vector<cpp_int> parity;
  for (int x = 0; x < 2 * N + 2; ++x) parity.push_back(x % 2);
  const auto f = from_alpha(alpha0, N);
  CHECK(balanced(f) == difference_oracle(parity, 2, N));
  CHECK(to_alpha(f, 0, reg).equals(alpha0));

  for (unsigned p : {2u, 3u}) {
    for (unsigned n = 0; n <= 3; ++n) {
      auto r = std::make_shared<Registry>();
      const auto digit = to_alpha(pi_bn(n, p, 1), n, r);
      CHECK(digit.equals(SparsePoly::generator(r, r->intern("alpha", n), PadicInt::one(p, 1))));
    }
  }

  std::mt19937_64 rng(11);
  for (unsigned p : {2u, 3u}) {
    const int Nr = 4;
    auto r = std::make_shared<Registry>();
    const auto rules = alpha_rules(r, p, 1, Nr);
    std::uniform_int_distribution<std::int64_t> c(-20, 20);
    std::uniform_int_distribution<unsigned> e(0, 3);
    for (int trial = 0; trial < 6; ++trial) {
      SparsePoly poly = SparsePoly::constant(r, PadicInt::from_int(p, c(rng), Nr));
      for (int t = 0; t < 3; ++t) {
        poly += SparsePoly::monomial(r, Monomial::of(r->intern("alpha", 0), e(rng) + 1) * Monomial::of(r->intern("alpha", 1), e(rng) + 1),
                                     PadicInt::from_int(p, c(rng), Nr));
      }
      const auto fn = from_alpha(poly, Nr);
      CHECK(to_alpha(fn, 1, r).equals(rules.normal_form(poly)));
    }
  }
}

TEST_CASE("antidiagonal") {
  for (unsigned p : {2u, 3u}) {
    for (unsigned n = 0; n <= 4; ++n) CHECK(antidiagonal_check(n, p, 8).pass);
  }
  ThetaOptions opts{3, 2, std::nullopt, 10};
  auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b", "bbar"}, opts);
  const auto ell = theta_generator(pres, "b") - theta_generator(pres, "bbar");
  CHECK(pi_map2(lambda_n(ell, 0), 6, "b", "bbar") == MahlerFn2(3, 6, {{PadicInt::one(3, 6)}}));
  CHECK(pi_map2(ell, 6, "b", "bbar") == MahlerFn2::outer(MahlerFn1::identity(3, 6), MahlerFn1::constant(3, 6, 1)) +
                               MahlerFn2::outer(MahlerFn1::constant(3, 6, 1), -MahlerFn1::identity(3, 6)));
}
