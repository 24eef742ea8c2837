#include "thetacalc/checks.hpp"

#include <algorithm>
#include <random>

#include "thetacalc/cohomology.hpp"
#include "thetacalc/lambda.hpp"
#include "thetacalc/mahler.hpp"
#include "thetacalc/qseries.hpp"
#include "thetacalc/theta.hpp"

namespace thetacalc {

namespace {

std::string num(unsigned n) {
  std::string s = std::to_string(n);
  return s.size() < 2 ? "0" + s : s;
}

ThetaOptions theta_options(const CheckParams& c, DegreeCap cap, unsigned levels) {
  ThetaOptions o{c.prime, levels, cap, 0};
  o.precision = c.precision + guard_digits(o);
  return o;
}

ThetaOptions theta_options(const CheckParams& c) { return theta_options(c, c.degree_cap, c.theta_levels); }

PresentationPtr free_on(std::vector<std::string> bases, const ThetaOptions& o) {
  return ThetaPresentation::free(std::make_shared<Registry>(), std::move(bases), o);
}

void require_levels(const CheckParams& c, unsigned needed, const std::string& what) {
  if (c.theta_levels < needed) {
    throw Error(ErrorKind::LevelCapExceeded, what + " needs at least " + std::to_string(needed) + " θ-levels");
  }
}

ThetaElement random_element(std::mt19937_64& rng, const PresentationPtr& pres, const std::vector<std::string>& bases,
                            unsigned levels, int terms = 3, int max_exp = 2) {
  std::uniform_int_distribution<std::int64_t> coeff(-9, 9);
  std::uniform_int_distribution<int> e(0, max_exp);
  std::uniform_int_distribution<unsigned> lvl(0, levels - 1);
  std::uniform_int_distribution<std::size_t> which(0, bases.size() - 1);
  ThetaElement out = theta_constant(pres, coeff(rng));
  for (int t = 0; t < terms; ++t) {
    ThetaElement m = theta_constant(pres, coeff(rng));
    for (int f = 0; f < 2; ++f) m = m * theta_generator(pres, bases[which(rng)], lvl(rng)).pow(e(rng));
    out = out + m;
  }
  return out;
}

MahlerFn1 random_fn(std::mt19937_64& rng, unsigned p, int N, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::uint64_t> c(0, prime_power(p, N) - 1);
  std::vector<PadicInt> cs;
  for (std::size_t i = len(rng); i > 0; --i) cs.push_back(PadicInt::from_residue(p, c(rng), N));
  return {p, N, cs};
}

/// Canonical text of a at the requested digit precision, guard digits dropped.
std::string canonical(const SparsePoly& a, int N) { return a.reduce_precision(N).render(); }
std::string canonical(const ThetaElement& a, int N) { return canonical(a.value(), N); }

std::string trial_tag(unsigned t) { return "trial " + std::to_string(t) + ": "; }

// ---------------------------------------------------------------- θ-algebra checks

CheckOutcome theta_axioms(const CheckParams& c) {
  const unsigned p = c.prime;
  require_levels(c, 2, "θ axioms");
  std::mt19937_64 rng(c.seed);
  auto pres = free_on({"b", "bbar"}, theta_options(c));
  CheckResult r;
  for (unsigned t = 0; t < c.trials && r.pass; ++t) {
    const auto x = random_element(rng, pres, {"b", "bbar"}, 2);
    const auto y = random_element(rng, pres, {"b", "bbar"}, 2);
    ThetaElement defect = theta_constant(pres, 0);
    std::int64_t binom = 1;
    for (unsigned i = 1; i < p; ++i) {
      binom = binom * static_cast<std::int64_t>(p - i + 1) / static_cast<std::int64_t>(i);
      defect = defect + (x.pow(i) * y.pow(p - i)).scale(pres->scalar(binom / static_cast<std::int64_t>(p)));
    }
    const auto add = theta_op(x + y) - (theta_op(x) + theta_op(y) - defect);
    if (!add.is_zero()) r &= CheckResult::fail(trial_tag(t) + "addition defect " + add.render());
    const auto tx = theta_op(x), ty = theta_op(y);
    const auto mul = theta_op(x * y) - (x.pow(p) * ty + tx * y.pow(p) + (tx * ty).scale(pres->scalar(p)));
    if (!mul.is_zero()) r &= CheckResult::fail(trial_tag(t) + "multiplication defect " + mul.render());
    const SparsePoly frob = reduce_mod((psi_p(x) - x.pow(p)).value(), {1, {}});
    if (!frob.is_zero()) r &= CheckResult::fail(trial_tag(t) + "ψ^p(a) - a^p mod p = " + frob.render());
  }

  // Translations b |-> u b + c move constants across degrees, so no degree cap here.
  auto uncapped = free_on({"b"}, theta_options(c, std::nullopt, 3));
  const auto b = theta_generator(uncapped, "b");
  std::uniform_int_distribution<std::int64_t> small(-5, 5);
  for (unsigned t = 0; t < c.trials && r.pass; ++t) {
    std::map<std::string, ThetaElement> images{
        {"b", b.scale(uncapped->scalar(1 + static_cast<std::int64_t>(p) * small(rng))) + theta_constant(uncapped, small(rng))}};
    const auto a = random_element(rng, uncapped, {"b"}, 2);
    const auto diff = adams_action(theta_op(a), images) - theta_op(adams_action(a, images));
    if (!diff.is_zero()) r &= CheckResult::fail(trial_tag(t) + "Adams-θ defect " + diff.render());
  }
  return {r, {{"trials", std::to_string(c.trials)}}};
}

CheckOutcome ghost_formulas(const CheckParams& c) {
  const unsigned p = c.prime;
  auto pres = free_on({"b"}, theta_options(c));
  const auto b = theta_generator(pres, "b");
  CheckResult r;
  for (unsigned n = 0; n < c.theta_levels; ++n) {
    ThetaElement ghost = theta_constant(pres, 0);
    std::uint64_t e = 1;
    for (int k = static_cast<int>(n); k >= 0; --k, e *= p) {
      ghost = ghost + theta_generator(pres, "b", static_cast<unsigned>(k)).pow(e).scale(
                          pres->scalar(static_cast<std::int64_t>(prime_power(p, k))));
    }
    const auto diff = psi_p_power(b, n) - ghost;
    if (!diff.is_zero()) r &= CheckResult::fail("ψ^{p^" + std::to_string(n) + "}(b) - w_" + std::to_string(n) + " = " + diff.render());
    const auto tn = theta_n(b, n) - theta_generator(pres, "b", n);
    if (!tn.is_zero()) r &= CheckResult::fail("θ_" + std::to_string(n) + "(b) - b_" + std::to_string(n) + " = " + tn.render());
  }
  std::map<std::string, std::string> data{{"psi_b", canonical(psi_p(b), c.precision)}, {"theta_b", canonical(theta_op(b), c.precision)}};
  if (c.theta_levels >= 3) data["theta_b1"] = canonical(theta_op(theta_generator(pres, "b", 1)), c.precision);
  return {r, data};
}

CheckOutcome f_congruence(const CheckParams& c) {
  require_levels(c, 2, "f-congruence");
  CheckResult r;
  std::map<std::string, std::string> data;
  const auto o = theta_options(c);
  for (unsigned i = 0; i <= std::min(2u, c.theta_levels - 2); ++i) {
    const auto ri = f_congruence_check(i, o);
    if (!ri.pass) r &= CheckResult::fail("i=" + std::to_string(i) + ": " + ri.witness);
    data["i" + num(i)] = ri.pass ? "pass" : "fail";
  }
  return {r, data};
}

std::vector<PadicInt> h_coefficients(const CheckParams& c) {
  const auto f = f_series(c.prime, c.q_terms, c.precision);
  return express_in_base(theta_on_series(f), f);
}

CheckOutcome x_congruence(const CheckParams& c) {
  require_levels(c, 3, "x-congruence");
  const auto h = h_coefficients(c);
  CheckResult r;
  std::map<std::string, std::string> data;
  for (unsigned i = 0; i <= std::min(1u, c.theta_levels - 3); ++i) {
    const auto ri = x_congruence_check(i, theta_options(c), h);
    if (!ri.pass) r &= CheckResult::fail("i=" + std::to_string(i) + ": " + ri.witness);
    data["i" + num(i)] = ri.pass ? "pass" : "fail";
  }
  return {r, data};
}

CheckOutcome witt_comultiplication(const CheckParams& c) {
  const unsigned levels = std::min(c.theta_levels, 4u);
  auto pres = free_on({"b"}, theta_options(c, c.degree_cap, levels));
  const Coproduct d01(pres, "b", "b", "b'");
  const Coproduct d12(pres, "b", "b'", "b''");
  auto three = ThetaPresentation::free(pres->registry(), {"b", "b'", "b''"}, pres->options());
  std::map<GeneratorId, SparsePoly> left, right;
  for (unsigned k = 0; k < levels; ++k) {
    left.emplace(three->level_id("b", k), d01.image(k));
    left.emplace(three->level_id("b'", k), three->level("b''", k));
    right.emplace(three->level_id("b", k), three->level("b", k));
    right.emplace(three->level_id("b'", k), d12.image(k));
  }
  CheckResult r;
  for (unsigned n = 0; n < levels; ++n) {
    const SparsePoly& dn = d01.image(n);
    const SparsePoly coassoc = substitute(dn, left) - substitute(dn, right);
    if (!coassoc.is_zero()) r &= CheckResult::fail("coassociativity at b_" + std::to_string(n) + ": " + coassoc.render());
    const auto bn = theta_generator(pres, "b", n);
    const auto d = d01.apply(bn);
    const auto cl = d01.counit_left(d) - bn, cr = d01.counit_right(d) - bn;
    if (!cl.is_zero() || !cr.is_zero()) r &= CheckResult::fail("counit at b_" + std::to_string(n) + ": " + cl.render() + " ; " + cr.render());
    const auto ghost = psi_p_power(theta_generator(pres, "b"), n);
    const auto prim = d01.apply(ghost) - (d01.left(ghost) + d01.right(ghost));
    if (!prim.is_zero()) r &= CheckResult::fail("ghost w_" + std::to_string(n) + " not primitive: " + prim.render());
  }
  std::map<std::string, std::string> data;
  if (levels >= 2) data["delta_b1"] = canonical(d01.image(1), c.precision);
  return {r, data};
}

CheckOutcome unit_power_invariance(const CheckParams& c) {
  const unsigned p = c.prime;
  const std::int64_t g = p == 2 ? 3 : 2;
  // 1 + h = g^2 at p = 2 (v(g - 1) = 1 is outside the domain there), else g^{p-1}.
  std::int64_t one_plus_h = 1;
  for (unsigned i = 0; i < (p == 2 ? 2 : p - 1); ++i) one_plus_h *= g;
  auto pres = free_on({"b"}, theta_options(c));
  const auto b = theta_generator(pres, "b").value();
  const SparsePoly h = pres->constant(one_plus_h - 1);
  const SparsePoly s = unit_power_series(h, -b, c.degree_cap);
  const SparsePoly shifted = substitute(s, {{pres->level_id("b", 0), b + pres->one()}});
  const int e = std::min(c.precision, s.precision());
  CheckResult r;
  if (e < c.precision) r &= CheckResult::fail("series known only mod p^" + std::to_string(e));
  const SparsePoly diff = reduce_mod(shifted * pres->constant(one_plus_h) - s, {e, {}});
  if (!diff.is_zero()) r &= CheckResult::fail("ψ^g(g^{-b(p-1)}) (1+h) - g^{-b(p-1)} = " + diff.render());
  const SparsePoly at_zero = reduce_mod(substitute(s, {{pres->level_id("b", 0), pres->zero()}}) - pres->one(), {e, {}});
  if (!at_zero.is_zero()) r &= CheckResult::fail("series at b = 0: " + at_zero.render());
  return {r, {{"one_plus_h", std::to_string(one_plus_h)}, {"precision", std::to_string(e)}}};
}

// ---------------------------------------------------------------- λ checks

CheckOutcome lambda_binomial(const CheckParams& c) {
  const unsigned p = c.prime;
  const int prec = c.precision + vp_factorial(p, c.lambda_max);
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::uint64_t> d(0, prime_power(p, prec) - 1);
  CheckResult r;
  for (unsigned t = 0; t < c.trials && r.pass; ++t) {
    const PadicInt x = PadicInt::from_residue(p, d(rng), prec);
    const auto lams = lambda_sequence(x, c.lambda_max);
    for (unsigned n = 0; n <= c.lambda_max; ++n) {
      if (!(lams[n] - padic_binomial(x, n)).is_zero()) {
        r &= CheckResult::fail(trial_tag(t) + "λ^" + std::to_string(n) + "(" + x.to_string() + ") = " +
                               lams[n].to_string() + " vs " + padic_binomial(x, n).to_string());
      }
    }
  }
  return {r, {{"lambda_max", std::to_string(c.lambda_max)}, {"trials", std::to_string(c.trials)}}};
}

CheckOutcome cartan(const CheckParams& c) {
  const unsigned p = c.prime;
  const unsigned n_max = std::min(c.lambda_max, p * p);
  require_levels(c, 3, "Cartan identity");
  std::mt19937_64 rng(c.seed);
  ThetaOptions o{p, 3, 10u, 0};
  o.precision = c.precision + guard_digits(o) + vp_factorial(p, n_max);
  auto pres = free_on({"b", "bbar"}, o);
  CheckResult r;
  for (unsigned t = 0; t < c.trials && r.pass; ++t) {
    const auto x = random_element(rng, pres, {"b", "bbar"}, 1, 2, 1);
    const auto y = random_element(rng, pres, {"b", "bbar"}, 1, 2, 1);
    const auto lx = lambda_sequence(x, n_max);
    const auto ly = lambda_sequence(y, n_max);
    const auto lxy = lambda_sequence(x + y, n_max);
    for (unsigned n = 0; n <= n_max; ++n) {
      const auto diff = lxy[n] - cartan_product(lx, ly, n);
      if (!diff.is_zero()) r &= CheckResult::fail(trial_tag(t) + "λ^" + std::to_string(n) + " Cartan defect " + diff.render());
    }
  }
  return {r, {{"n_max", std::to_string(n_max)}, {"trials", std::to_string(c.trials)}}};
}

// ---------------------------------------------------------------- Mahler checks

CheckOutcome mahler_roundtrip(const CheckParams& c) {
  const unsigned p = c.prime;
  const int N = c.precision;
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::int64_t> point(-50, 1000);
  std::uniform_int_distribution<std::uint64_t> big(0, prime_power(p, N + 8) - 1);
  std::uniform_int_distribution<std::size_t> idx(1, 12);
  CheckResult r;
  for (unsigned t = 0; t < c.trials && r.pass; ++t) {
    const auto f = random_fn(rng, p, N, 12);
    const auto g = random_fn(rng, p, N, 8);
    const auto back = MahlerFn1::from_samples(sample(f, f.length() + 3), N);
    if (!(back == f)) r &= CheckResult::fail(trial_tag(t) + "round trip " + f.render() + " -> " + back.render());
    const auto fg = multiply(f, g);
    for (int i = 0; i < 20; ++i) {
      const PadicInt x = PadicInt::from_residue(p, big(rng), N + 8);
      if (!(evaluate(fg, x) - evaluate(f, x) * evaluate(g, x)).is_zero()) {
        r &= CheckResult::fail(trial_tag(t) + "product at " + x.to_string() + ": " + fg.render());
      }
    }
    const std::size_t n = idx(rng);
    const auto pascal = translate(MahlerFn1::binomial(p, N, n), 1) -
                        (MahlerFn1::binomial(p, N, n) + MahlerFn1::binomial(p, N, n - 1));
    if (!pascal.is_zero()) r &= CheckResult::fail(trial_tag(t) + "Pascal defect " + pascal.render());
    const std::int64_t shift = point(rng);
    if (!(translate(translate(f, shift), -shift) == f)) r &= CheckResult::fail(trial_tag(t) + "translate by ±" + std::to_string(shift));
  }
  return {r, {{"trials", std::to_string(c.trials)}}};
}

CheckOutcome pi_digits(const CheckParams& c) {
  const unsigned p = c.prime;
  CheckResult r;
  std::map<std::string, std::string> data;
  for (unsigned n = 0; n <= std::min(3u, c.theta_levels - 1); ++n) {
    auto reg = std::make_shared<Registry>();
    const SparsePoly digit = to_alpha(pi_bn(n, p, 1), n, reg);
    const SparsePoly alpha = SparsePoly::generator(reg, reg->intern("alpha", n), PadicInt::one(p, 1));
    if (!digit.equals(alpha)) r &= CheckResult::fail("π(b_" + std::to_string(n) + ") mod p = " + digit.render());
    data["pi_b" + num(n)] = pi_bn(n, p, c.precision).render();
  }
  return {r, data};
}

CheckOutcome pi_lambda_binomial(const CheckParams& c) {
  const unsigned p = c.prime;
  const int N = c.precision;
  ThetaOptions o{p, c.theta_levels, c.degree_cap, 0};
  o.precision = N + guard_digits(o) + vp_factorial(p, c.lambda_max);
  auto pres = free_on({"b"}, o);
  const auto b = theta_generator(pres, "b");
  CheckResult r;
  const auto lams = lambda_sequence(b, c.lambda_max);
  for (unsigned k = 0; k <= c.lambda_max; ++k) {
    const auto got = pi_map(lams[k], N);
    if (!(got == MahlerFn1::binomial(p, N, k))) r &= CheckResult::fail("π(λ^" + std::to_string(k) + "(b)) = " + got.render());
  }
  auto uncapped = free_on({"b"}, theta_options(c, std::nullopt, c.theta_levels));
  const auto ub = theta_generator(uncapped, "b");
  const auto fpi = pi_map(psi_p(ub) - ub, N);
  if (!fpi.is_zero()) r &= CheckResult::fail("π(f) = " + fpi.render());
  for (unsigned n = 1; n + 1 < c.theta_levels && n <= 3; ++n) {
    const auto bn = theta_generator(uncapped, "b", n);
    const auto k = pi_map(psi_p(bn) - bn, N);
    if (!k.is_zero()) r &= CheckResult::fail("π(ψ^p(b_" + std::to_string(n) + ") - b_" + std::to_string(n) + ") = " + k.render());
  }
  return {r, {{"pi_lambda2", pi_map(lams[std::min(2u, c.lambda_max)], N).render()}}};
}

CheckOutcome section_comultiplicative(const CheckParams& c) {
  const unsigned p = c.prime;
  const int N = c.precision;
  const unsigned n_max = p * p;
  require_levels(c, 3, "section check");
  ThetaOptions o{p, 3, c.degree_cap, 0};
  o.precision = N + guard_digits(o) + vp_factorial(p, std::max(n_max, 8u));
  auto pres = free_on({"b"}, o);
  CheckResult r;
  for (std::size_t k = 0; k < 8; ++k) {
    const auto beta = MahlerFn1::binomial(p, N, k);
    const auto back = pi_map(section_s(beta, pres), N);
    if (!(back == beta)) r &= CheckResult::fail("π(s(β_" + std::to_string(k) + ")) = " + back.render());
  }
  const Coproduct delta(pres, "b", "b", "b'");
  const auto lams = lambda_sequence(theta_generator(pres, "b"), n_max);
  std::vector<ThetaElement> left, right;
  for (const auto& l : lams) {
    left.push_back(delta.left(l));
    right.push_back(delta.right(l));
  }
  for (unsigned n = 0; n <= n_max; ++n) {
    const auto diff = delta.apply(lams[n]) - cartan_product(left, right, n);
    if (!diff.is_zero()) r &= CheckResult::fail("Δ(λ^" + std::to_string(n) + "(b)) defect " + diff.render());
  }
  return {r, {{"n_max", std::to_string(n_max)}, {"s_beta02", canonical(section_s(MahlerFn1::binomial(p, N, 2), pres), N)}}};
}

CheckOutcome hopkins_mistake(const CheckParams& c) {
  const unsigned p = c.prime;
  const unsigned n_max = std::min(6u, c.lambda_max);
  unsigned levels = 1;
  for (unsigned q = p; q <= n_max; q *= p) ++levels;
  require_levels(c, levels + 1, "Hopkins check");
  ThetaOptions o{p, c.theta_levels, c.degree_cap, 0};
  o.precision = c.precision + guard_digits(o) + vp_factorial(p, n_max);
  auto pres = free_on({"b"}, o);
  CheckResult r;
  std::map<std::string, std::string> data;
  for (unsigned n = 1; n <= n_max; ++n) {
    ThetaElement input = theta_constant(pres, 0);
    const auto image = hopkins_mistake_image(n, pres, c.precision, &input);
    if (input.is_zero()) r &= CheckResult::fail("s(β_" + std::to_string(n) + ") = 0");
    if (!image.is_zero()) r &= CheckResult::fail("n=" + std::to_string(n) + " image " + image.render());
    data["image_n" + num(n)] = image.render();
    data["input_n" + num(n)] = canonical(input, c.precision);
  }
  return {r, data};
}

CheckOutcome antidiagonal(const CheckParams& c) {
  CheckResult r;
  for (unsigned n = 0; n <= 4; ++n) r &= antidiagonal_check(n, c.prime, c.precision, 8);
  return {r, {{"grid", "8"}, {"n_max", "4"}}};
}

CheckOutcome ell_relation(const CheckParams& c) {
  require_levels(c, 2, "ℓ relation");
  return {ell_relation_check(theta_options(c)), {}};
}

// ---------------------------------------------------------------- modular forms

CheckOutcome qexp_congruence(const CheckParams& c) {
  const auto f = f_series(c.prime, c.q_terms, c.precision);
  const auto j = j_inverse(c.prime, c.q_terms, c.precision);
  CheckResult r;
  if (!f[0].is_zero()) r &= CheckResult::fail("f has constant term " + f[0].to_string());
  for (std::size_t k = 0; k < c.q_terms; ++k) {
    if (f[k].reduce_to(1) != j[k].reduce_to(1)) {
      r &= CheckResult::fail("q^" + std::to_string(k) + ": f = " + f[k].to_string() + ", j^-1 = " + j[k].to_string());
    }
  }
  return {r, {{"f_series", f.render(16)}, {"j_inverse", j.render(16)}}};
}

CheckOutcome h_integrality(const CheckParams& c) {
  const auto f = f_series(c.prime, c.q_terms, c.precision);
  const auto tf = theta_on_series(f);
  const auto h = express_in_base(tf, f);
  CheckResult r;
  if (!compose(h, f).congruent(tf)) r &= CheckResult::fail("h(f) does not reproduce θ(f)");
  return {r, {{"h", QSeries(c.prime, {h.begin(), h.begin() + std::min<std::ptrdiff_t>(12, static_cast<std::ptrdiff_t>(h.size()))}).render(12)},
              {"theta_f", tf.render(16)}}};
}

CheckOutcome alpha_invertibility(const CheckParams& c) {
  const auto f = f_series(c.prime, c.q_terms, c.precision);
  const auto j = j_inverse(c.prime, c.q_terms, c.precision);
  const auto alpha = express_in_base(f, j);
  CheckResult r;
  if (!alpha[0].is_zero()) r &= CheckResult::fail("α has constant term " + alpha[0].to_string());
  if (!alpha[1].is_unit()) r &= CheckResult::fail("α'(0) = " + alpha[1].to_string() + " is not a unit");
  if (!compose(alpha, j).congruent(f)) r &= CheckResult::fail("α(j^-1) does not reproduce f");
  const auto tf = theta_on_series(f);
  const auto h = express_in_base(tf, f);
  if (!compose(h, compose(alpha, j)).congruent(tf)) r &= CheckResult::fail("h(α(j^-1)) does not reproduce θ(f)");
  return {r, {{"alpha", QSeries(c.prime, {alpha.begin(), alpha.begin() + std::min<std::ptrdiff_t>(12, static_cast<std::ptrdiff_t>(alpha.size()))}).render(12)}}};
}

// ---------------------------------------------------------------- cohomology

CheckOutcome cohomology_presets(const CheckParams& c) {
  const unsigned p = c.prime;
  const int N = c.precision;
  CheckResult r;
  std::map<std::string, std::string> data;
  const auto trivial = h0_h1(ko_preset(p, 0, N));
  const CohomologyGroup full{p, {N}};
  if (!(trivial.h0 == full) || !(trivial.h1 == full)) {
    r &= CheckResult::fail("trivial action: H0 = " + trivial.h0.render() + ", H1 = " + trivial.h1.render());
  }
  if (p == 2) {
    const auto ko4 = h0_h1(ko_preset(2, 4, N));
    if (ko4.h1.length() != 3) r &= CheckResult::fail("KO_4: H1 = " + ko4.h1.render());
  }
  for (unsigned t = 0; t < 16; ++t) {
    const auto a = ko_preset(p, static_cast<int>(t), N);
    const auto hh = h0_h1(a);
    data["t" + num(t) + "_h0"] = hh.h0.render();
    data["t" + num(t) + "_h1"] = hh.h1.render();
    if (!cohomology(a, 2).is_zero()) r &= CheckResult::fail("H^2 nonzero in degree " + std::to_string(t));
  }

  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::uint64_t> entry(0, prime_power(p, N) - 1);
  std::uniform_int_distribution<int> shift(0, 4);
  for (unsigned t = 0; t < c.trials && r.pass; ++t) {
    // When ψ^g and ψ^g - 1 are both invertible mod p, both groups vanish.
    Matrix op(3);
    for (auto& row : op) {
      for (int j = 0; j < 3; ++j) row.push_back(PadicInt::from_residue(p, entry(rng), N));
    }
    Matrix shifted = op;
    for (std::size_t i = 0; i < 3; ++i) shifted[i][i] -= PadicInt::one(p, N);
    const auto units = [&](const Matrix& m) {
      const auto inv = smith_normal_form(m, p, 1).invariants;
      return std::all_of(inv.begin(), inv.end(), [](int v) { return v == 0; });
    };
    if (units(op) && units(shifted)) {
      const auto hh = h0_h1(CyclicAction{p, N, {N, N, N}, op});
      if (!hh.h0.is_zero() || !hh.h1.is_zero()) r &= CheckResult::fail(trial_tag(t) + "H0 = " + hh.h0.render() + ", H1 = " + hh.h1.render());
    }

    Matrix m(4);
    for (auto& row : m) {
      for (int j = 0; j < 4; ++j) row.push_back(PadicInt::from_residue(p, entry(rng), N).mul_p_power(shift(rng)).reduce_to(N));
    }
    const auto s = smith_normal_form(m, p, N);
    if (!(multiply(multiply(s.U, m), s.V) == s.D)) r &= CheckResult::fail(trial_tag(t) + "U A V != D");
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (i != j && !s.D[i][j].is_zero()) r &= CheckResult::fail(trial_tag(t) + "Smith form not diagonal");
      }
    }
  }
  return {r, data};
}

}  // namespace

bool CheckInfo::supports(unsigned p) const { return std::find(primes.begin(), primes.end(), p) != primes.end(); }

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry{
      {"theta-axioms", {2, 3, 5}, theta_axioms},
      {"ghost-formulas", {2, 3, 5}, ghost_formulas},
      {"f-congruence", {2, 3, 5}, f_congruence},
      {"x-congruence", {2, 3}, x_congruence},
      {"witt-comultiplication", {2, 3, 5}, witt_comultiplication},
      {"unit-power-invariance", {2, 3, 5}, unit_power_invariance},
      {"lambda-binomial", {2, 3, 5}, lambda_binomial},
      {"cartan", {2, 3, 5}, cartan},
      {"mahler-roundtrip", {2, 3, 5}, mahler_roundtrip},
      {"pi-digits", {2, 3, 5}, pi_digits},
      {"pi-lambda-binomial", {2, 3, 5}, pi_lambda_binomial},
      {"section-comultiplicative", {2, 3, 5}, section_comultiplicative},
      {"hopkins-mistake", {2, 3, 5}, hopkins_mistake},
      {"antidiagonal", {2, 3, 5}, antidiagonal},
      {"ell-relation", {2, 3, 5}, ell_relation},
      {"qexp-congruence", {2, 3}, qexp_congruence},
      {"h-integrality", {2, 3}, h_integrality},
      {"alpha-invertibility", {2, 3}, alpha_invertibility},
      {"cohomology-presets", {2, 3}, cohomology_presets},
  };
  return registry;
}

const CheckInfo* find_check(const std::string& name) {
  for (const auto& c : check_registry()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace thetacalc
