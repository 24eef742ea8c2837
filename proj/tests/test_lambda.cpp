#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "thetacalc/lambda.hpp"

using namespace thetacalc;

TEST_CASE("lambda on Z_p") {
  for (unsigned p : {2u, 3u, 5u}) {
    const PadicInt one = PadicInt::one(p, 12);
    auto lams = lambda_sequence(one, 6);
    CHECK(lams[0] == one);
    CHECK(lams[1] == one);
    for (unsigned n = 2; n <= 6; ++n) CHECK(lams[n].is_zero());
  }
  CHECK(lambda_n(PadicInt::from_int(5, 3, 10), 2).residue() == 3);
  CHECK_THROWS_AS(lambda_n(PadicInt::from_int(2, 3, 3), 4), Error);

  std::mt19937_64 rng(41);
  for (unsigned p : {2u, 3u, 5u}) {
    std::uniform_int_distribution<std::uint64_t> d(0, prime_power(p, 18) - 1);
    for (int i = 0; i < 70; ++i) {
      const PadicInt x = PadicInt::from_residue(p, d(rng), 18);
      auto lams = lambda_sequence(x, 12);
      for (unsigned n = 0; n <= 12; ++n) CHECK(lams[n] == padic_binomial(x, n));
    }
  }
}

TEST_CASE("cartan product on Z_p") {
  const PadicInt two = PadicInt::from_int(3, 2, 10);
  const PadicInt three = PadicInt::from_int(3, 3, 10);
  auto lx = lambda_sequence(two, 4);
  auto ly = lambda_sequence(three, 4);
  CHECK(cartan_product(lx, ly, 1) == two + three);
  CHECK(cartan_product(lx, ly, 2).residue() == 10);
  auto l1 = lambda_sequence(PadicInt::one(3, 10), 4);
  for (unsigned n = 1; n <= 4; ++n) CHECK(cartan_product(l1, ly, n) == ly[n] + ly[n - 1]);
  CHECK_THROWS_AS(cartan_product(std::span(lx).first(2), ly, 3), Error);
}

TEST_CASE("lambda in free theta algebras") {
  auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, ThetaOptions{2, 4, 24u, 20});
  auto b = theta_generator(pres, "b");
  auto lams = lambda_sequence(b, 4);
  CHECK(lams[1].equals(b));
  CHECK(lams[2].equals(-theta_generator(pres, "b", 1)));
  CHECK(lambda_sequence(theta_constant(pres, 1), 5)[3].is_zero());
}

TEST_CASE("cartan identity on random elements") {
  std::mt19937_64 rng(42);
  for (unsigned p : {2u, 3u}) {
    auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b", "bbar"}, ThetaOptions{p, 3, 10u, 18});
    std::uniform_int_distribution<std::int64_t> c(-4, 4);
    std::uniform_int_distribution<int> e(0, 2);
    for (int trial = 0; trial < 8; ++trial) {
      auto rand_el = [&] {
        ThetaElement out = theta_constant(pres, c(rng));
        for (const char* base : {"b", "bbar"}) {
          out = out + theta_generator(pres, base).pow(e(rng)).scale(pres->scalar(c(rng)));
        }
        return out;
      };
      auto x = rand_el();
      auto y = rand_el();
      const unsigned n = p * p;
      auto lx = lambda_sequence(x, n);
      auto ly = lambda_sequence(y, n);
      auto lxy = lambda_sequence(x + y, n);
      for (unsigned k = 0; k <= n; ++k) CHECK(lxy[k].equals(cartan_product(lx, ly, k)));
    }
  }
}

TEST_CASE("coproduct of lambda(b)") {
  for (unsigned p : {2u, 3u}) {
    auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, ThetaOptions{p, 4, 24u, 24});
    Coproduct delta(pres, "b", "b", "b'");
    const unsigned n = p * p;
    auto lams = lambda_sequence(theta_generator(pres, "b"), n);
    std::vector<ThetaElement> left, right;
    for (const auto& l : lams) {
      left.push_back(delta.left(l));
      right.push_back(delta.right(l));
    }
    for (unsigned k = 0; k <= n; ++k) CHECK(delta.apply(lams[k]).equals(cartan_product(left, right, k)));
  }
}
