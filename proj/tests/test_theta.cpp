#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "thetacalc/theta.hpp"

using namespace thetacalc;

namespace {

ThetaOptions opts(unsigned p, unsigned K = 4, unsigned D = 12, int prec = 16) {
  return ThetaOptions{p, K, D, prec};
}

PresentationPtr free_on(std::vector<std::string> bases, const ThetaOptions& o) {
  return ThetaPresentation::free(std::make_shared<Registry>(), std::move(bases), o);
}

// Random element using levels below `max_level` of the given bases.
ThetaElement random_element(std::mt19937_64& rng, const PresentationPtr& pres, const std::vector<std::string>& bases,
                            unsigned max_level, int terms = 3, int max_exp = 2) {
  std::uniform_int_distribution<std::int64_t> coeff(-9, 9);
  std::uniform_int_distribution<int> e(0, max_exp);
  std::uniform_int_distribution<unsigned> lvl(0, max_level - 1);
  std::uniform_int_distribution<std::size_t> which(0, bases.size() - 1);
  ThetaElement out = theta_constant(pres, coeff(rng));
  for (int t = 0; t < terms; ++t) {
    ThetaElement m = theta_constant(pres, coeff(rng));
    for (int f = 0; f < 2; ++f) m = m * theta_generator(pres, bases[which(rng)], lvl(rng)).pow(e(rng));
    out = out + m;
  }
  return out;
}

}  // namespace

TEST_CASE("ghost formulas") {
  auto pres = free_on({"b"}, opts(2));
  auto b = theta_generator(pres, "b");
  auto b1 = theta_generator(pres, "b", 1);
  auto b2 = theta_generator(pres, "b", 2);
  auto c = [&](std::int64_t v) { return theta_constant(pres, v); };
  CHECK(psi_p(b).equals(b.pow(2) + c(2) * b1));
  CHECK(psi_p(c(1)).equals(c(1)));
  CHECK(psi_p(psi_p(b)).equals(b.pow(4) + c(2) * b1.pow(2) + c(4) * b2));
  CHECK(psi_p_power(b, 2).equals(psi_p(psi_p(b))));

  for (unsigned p : {2u, 3u, 5u}) {
    auto pr = free_on({"b"}, opts(p, 4, 24, 20));
    auto x = theta_generator(pr, "b");
    for (unsigned n = 0; n < 4; ++n) {
      CHECK(theta_n(x, n).equals(theta_generator(pr, "b", n)));
      // ψ^{p^n}(b) = Σ p^k b_k^{p^{n-k}}
      ThetaElement ghost = theta_constant(pr, 0);
      std::uint64_t e = 1;
      for (int k = static_cast<int>(n); k >= 0; --k) {
        ghost = ghost + theta_generator(pr, "b", k).pow(e).scale(pr->scalar(static_cast<std::int64_t>(prime_power(p, k))));
        e *= p;
      }
      CHECK(psi_p_power(x, n).equals(ghost));
    }
  }
}

TEST_CASE("theta basics") {
  auto pres = free_on({"b"}, opts(3));
  auto b = theta_generator(pres, "b");
  CHECK(theta_op(b).equals(theta_generator(pres, "b", 1)));
  CHECK(theta_op(theta_constant(pres, 1)).is_zero());
  // Level generators are ghost-defined, so θ(b_1) carries correction terms.
  CHECK_FALSE(theta_op(theta_generator(pres, "b", 1)).equals(theta_generator(pres, "b", 2)));

  auto txy = free_on({"x", "y"}, opts(2));
  auto x = theta_generator(txy, "x");
  auto y = theta_generator(txy, "y");
  CHECK((theta_op(x + y) - theta_op(x) - theta_op(y)).equals(-(x * y)));

  try {
    psi_p(theta_generator(pres, "b", 3));
    FAIL("expected LevelCapExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LevelCapExceeded);
  }
}

TEST_CASE("adams action examples") {
  for (unsigned p : {2u, 3u, 5u}) {
    auto pres = free_on({"b", "bbar"}, opts(p, 4, 16, 18));
    auto b = theta_generator(pres, "b");
    auto bb = theta_generator(pres, "bbar");
    auto one = theta_constant(pres, 1);
    auto f = psi_p(b) - b;
    std::map<std::string, ThetaElement> shift{{"b", b + one}, {"bbar", bb + one}};
    CHECK(adams_action(f, shift).equals(f));
    CHECK(adams_action(b - bb, shift).equals(b - bb));
    std::map<std::string, ThetaElement> id{{"b", b}, {"bbar", bb}};
    auto a = theta_generator(pres, "b", 2) * bb + theta_generator(pres, "bbar", 1).pow(3);
    CHECK(adams_action(a, id).equals(a));
  }
}

TEST_CASE("relation presented algebra") {
  auto reg = std::make_shared<Registry>();
  ThetaOptions o = opts(2, 4, 10, 16);
  const GeneratorId f0 = reg->intern("f", 0);
  SparsePoly fpoly = SparsePoly::generator(reg, f0, PadicInt::one(2, 16), o.degree_cap);
  SparsePoly h = fpoly * fpoly + fpoly.constant_like(3) * fpoly;
  auto pres = ThetaPresentation::with_relations(reg, {"f"}, {{"f", h}}, o);
  auto f = theta_generator(pres, "f");
  CHECK(theta_op(f).value().equals(h));
  CHECK(psi_p(f).value().equals(fpoly * fpoly + h.mul_p_power(1).reduce_precision(16)));
  CHECK_THROWS_AS(theta_generator(pres, "f", 1), Error);
}

TEST_CASE("comultiplication examples") {
  auto pres = free_on({"b"}, opts(2, 4, 24, 20));
  Coproduct delta(pres, "b", "b", "b'");
  auto T = delta.target();
  auto b = theta_generator(T, "b");
  auto bp = theta_generator(T, "b'");
  CHECK(delta.apply(theta_generator(pres, "b")).equals(b + bp));
  CHECK(delta.apply(theta_generator(pres, "b", 1))
            .equals(theta_generator(T, "b", 1) + theta_generator(T, "b'", 1) - b * bp));

  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    auto a = random_element(rng, pres, {"b"}, 4);
    CHECK(delta.counit_left(delta.apply(a)).equals(a));
    CHECK(delta.counit_right(delta.apply(a)).equals(a));
  }
  CHECK(counit(theta_constant(pres, 5) + theta_generator(pres, "b", 2)) == pres->scalar(5));
}

TEST_CASE("coassociativity and primitive ghosts") {
  for (unsigned p : {2u, 3u}) {
    auto pres = free_on({"b"}, opts(p, 4, 24, 20));
    Coproduct d01(pres, "b", "b", "b'");
    Coproduct d12(pres, "b", "b'", "b''");
    auto three = ThetaPresentation::free(pres->registry(), {"b", "b'", "b''"}, pres->options());
    for (unsigned n = 0; n < 4; ++n) {
      const SparsePoly& dn = d01.image(n);
      std::map<GeneratorId, SparsePoly> left, right;
      for (unsigned k = 0; k < 4; ++k) {
        left.emplace(three->level_id("b", k), d01.image(k));
        left.emplace(three->level_id("b'", k), three->level("b''", k));
        right.emplace(three->level_id("b", k), three->level("b", k));
        right.emplace(three->level_id("b'", k), d12.image(k));
      }
      CHECK(substitute(dn, left).equals(substitute(dn, right)));

      auto ghost = psi_p_power(theta_generator(pres, "b"), n);
      CHECK(d01.apply(ghost).equals(d01.left(ghost) + d01.right(ghost)));
    }
  }
}

TEST_CASE("unit power series") {
  auto pres = free_on({"b"}, opts(3, 4, 24, 26));
  auto b = theta_generator(pres, "b").value();
  const SparsePoly h = pres->constant(3);  // 1 + h = 2^2
  const SparsePoly inv = unit_power_series(h, -b, 24);
  const SparsePoly fwd = unit_power_series(h, b, 24);
  CHECK(reduce_mod((inv * fwd) - pres->one(), {inv.precision(), {}}).is_zero());
  CHECK(inv.precision() == unit_power_tail_bound(3, 1, 24));

  const SparsePoly at_zero = substitute(inv, {{pres->level_id("b", 0), pres->zero()}});
  CHECK(at_zero.equals(pres->one()));

  const SparsePoly shifted = substitute(inv, {{pres->level_id("b", 0), b + pres->one()}});
  CHECK(reduce_mod(shifted * (pres->one() + h) - inv, {inv.precision(), {}}).is_zero());

  auto p2 = free_on({"b"}, opts(2, 4, 24, 38));
  auto b2 = theta_generator(p2, "b").value();
  try {
    unit_power_series(p2->constant(2), -b2, 24);
    FAIL("expected OutsideDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutsideDomain);
  }
  const SparsePoly s = unit_power_series(p2->constant(8), -b2, 24);
  const SparsePoly s_shift = substitute(s, {{p2->level_id("b", 0), b2 + p2->one()}});
  CHECK(reduce_mod(s_shift * p2->constant(9) - s, {12, {}}).is_zero());
}

TEST_CASE("f congruence") {
  for (unsigned p : {2u, 3u, 5u}) {
    ThetaOptions o{p, 4, 24u, 12};
    o.precision += guard_digits(o);
    for (unsigned i = 0; i < 3; ++i) {
      CheckResult r = f_congruence_check(i, o);
      CHECK_MESSAGE(r.pass, "p=" << p << " i=" << i << " witness " << r.witness);
    }
  }
  CHECK_THROWS_AS(f_congruence_check(3, ThetaOptions{2, 4, 24u, 20}), Error);
}

TEST_CASE("ell relation") {
  for (unsigned p : {2u, 3u, 5u}) CHECK(ell_relation_check(ThetaOptions{p, 2, 24u, 14}).pass);
}

TEST_CASE("theta axioms on random elements") {
  std::mt19937_64 rng(31);
  for (unsigned p : {2u, 3u, 5u}) {
    auto pres = free_on({"b", "bbar"}, opts(p, 3, 10, 14));
    for (int trial = 0; trial < 20; ++trial) {
      auto x = random_element(rng, pres, {"b", "bbar"}, 2);
      auto y = random_element(rng, pres, {"b", "bbar"}, 2);
      // θ(x+y) = θ(x) + θ(y) - Σ_{0<i<p} binom(p,i)/p x^i y^{p-i}
      ThetaElement defect = theta_constant(pres, 0);
      std::int64_t binom = 1;
      for (unsigned i = 1; i < p; ++i) {
        binom = binom * static_cast<std::int64_t>(p - i + 1) / static_cast<std::int64_t>(i);
        defect = defect + (x.pow(i) * y.pow(p - i)).scale(pres->scalar(binom / static_cast<std::int64_t>(p)));
      }
      CHECK(theta_op(x + y).equals(theta_op(x) + theta_op(y) - defect));
      // θ(xy) = x^p θ(y) + θ(x) y^p + p θ(x) θ(y)
      auto tx = theta_op(x);
      auto ty = theta_op(y);
      CHECK(theta_op(x * y).equals(x.pow(p) * ty + tx * y.pow(p) + (tx * ty).scale(pres->scalar(p))));
      // ψ^p(a) ≡ a^p mod p
      CHECK(reduce_mod((psi_p(x) - x.pow(p)).value(), {1, {}}).is_zero());
    }
  }
}

TEST_CASE("adams operations commute with theta") {
  std::mt19937_64 rng(32);
  for (unsigned p : {2u, 3u}) {
    // Translations do not preserve a degree truncation, so run uncapped.
    auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, ThetaOptions{p, 3, std::nullopt, 14});
    auto b = theta_generator(pres, "b");
    for (int trial = 0; trial < 10; ++trial) {
      std::uniform_int_distribution<std::int64_t> c(-5, 5);
      std::map<std::string, ThetaElement> images{{"b", b.scale(pres->scalar(1 + p * c(rng))) + theta_constant(pres, c(rng))}};
      auto a = random_element(rng, pres, {"b"}, 2);
      CHECK(adams_action(theta_op(a), images).equals(theta_op(adams_action(a, images))));
    }
  }
}
