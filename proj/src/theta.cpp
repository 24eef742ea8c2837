#include "thetacalc/theta.hpp"

#include <algorithm>

namespace thetacalc {

int guard_digits(const ThetaOptions& options) {
  const unsigned d = options.degree_cap.value_or(0);
  return static_cast<int>(options.level_cap) + vp_factorial(options.prime, d);
}

// ---------------------------------------------------------------- presentation

ThetaPresentation::ThetaPresentation(RegistryPtr registry, std::vector<std::string> bases, ThetaOptions options)
    : registry_(std::move(registry)), bases_(std::move(bases)), options_(options) {
  if (!registry_) throw Error(ErrorKind::InvalidArgument, "presentation needs a registry");
  if (!is_supported_prime(options_.prime)) {
    throw Error(ErrorKind::UnsupportedPrime, "p=" + std::to_string(options_.prime));
  }
  if (options_.level_cap < 1) throw Error(ErrorKind::InvalidArgument, "level cap must be at least 1");
  if (bases_.empty()) throw Error(ErrorKind::InvalidArgument, "presentation needs a base generator");
}

PresentationPtr ThetaPresentation::free(RegistryPtr registry, std::vector<std::string> bases, ThetaOptions options) {
  return with_relations(std::move(registry), std::move(bases), {}, options);
}

PresentationPtr ThetaPresentation::with_relations(RegistryPtr registry, std::vector<std::string> bases,
                                                  std::map<std::string, SparsePoly> relations, ThetaOptions options) {
  std::shared_ptr<ThetaPresentation> pres(new ThetaPresentation(std::move(registry), std::move(bases), options));
  pres->build(std::move(relations));
  return pres;
}

void ThetaPresentation::build(std::map<std::string, SparsePoly> relations) {
  const unsigned p = options_.prime;
  const unsigned K = options_.level_cap;
  const int W = options_.precision;
  const DegreeCap cap = options_.degree_cap;
  if (W + static_cast<int>(K) - 2 > max_precision(p)) {
    throw Error(ErrorKind::PrecisionOverflow, "working precision " + std::to_string(W) + " with " +
                                                  std::to_string(K) + " levels exceeds 63 bits at p=" +
                                                  std::to_string(p));
  }
  const int hi = std::min(W + static_cast<int>(K), max_precision(p));

  for (const auto& [base, rel] : relations) {
    if (std::find(bases_.begin(), bases_.end(), base) == bases_.end()) {
      throw Error(ErrorKind::InvalidArgument, "relation for unknown base " + base);
    }
  }
  for (const auto& base : bases_) {
    if (relations.count(base)) {
      owned_.emplace(registry_->intern(base, 0), std::make_pair(base, 0U));
    } else {
      for (unsigned n = 0; n < K; ++n) owned_.emplace(registry_->intern(base, n), std::make_pair(base, n));
    }
  }

  std::vector<RewriteRule> rules;
  for (auto& [base, rel] : relations) {
    if (rel.registry() != registry_) throw Error(ErrorKind::RegistryMismatch, "relation for " + base);
    for (GeneratorId g : rel.generators()) {
      if (!owned_.count(g)) {
        throw Error(ErrorKind::InvalidArgument,
                    "relation for " + base + " mentions " + registry_->label(g) + " outside the presentation");
      }
    }
    SparsePoly r = rel.with_cap(cap).reduce_precision(W);
    rules.push_back({registry_->intern(base, 1), 1, r});
    related_.emplace(base, r);
  }
  if (!rules.empty()) rules_.emplace(std::move(rules));

  const PadicInt one_hi = PadicInt::one(p, hi);
  auto gen = [&](const std::string& base, unsigned n) {
    return SparsePoly::generator(registry_, registry_->intern(base, n), one_hi, cap);
  };

  for (const auto& base : bases_) {
    if (auto it = related_.find(base); it != related_.end()) {
      SparsePoly b = gen(base, 0).reduce_precision(W);
      psi_images_.emplace(registry_->intern(base, 0), b.pow(p) + it->second.mul_p_power(1).reduce_precision(W));
      continue;
    }
    // Ghost recursion: p^n ψ(b_n) = w_{n+1} - Σ_{k<n} p^k ψ(b_k)^{p^{n-k}}.
    std::vector<SparsePoly> psi;
    for (unsigned n = 0; n + 1 < K; ++n) {
      SparsePoly rhs = SparsePoly(registry_, p, hi, cap);
      std::uint64_t e = 1;
      for (int k = static_cast<int>(n) + 1; k >= 0; --k) {
        rhs += gen(base, static_cast<unsigned>(k)).pow(e).mul_p_power(k).reduce_precision(hi);
        e *= p;
      }
      std::uint64_t pe = p;
      for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
        rhs -= psi[static_cast<std::size_t>(k)].pow(pe).mul_p_power(k).reduce_precision(hi);
        pe *= p;
      }
      psi.push_back(rhs.exact_div_p(static_cast<int>(n)));
    }
    for (unsigned n = 0; n + 1 < K; ++n) {
      psi_images_.emplace(registry_->intern(base, n), psi[n].reduce_precision(W));
    }
  }
}

GeneratorId ThetaPresentation::level_id(const std::string& base, unsigned n) const {
  if (std::find(bases_.begin(), bases_.end(), base) == bases_.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown base " + base);
  }
  if (is_related(base) && n > 0) {
    throw Error(ErrorKind::InvalidArgument, base + " carries a θ relation; only level 0 is a generator");
  }
  if (n >= options_.level_cap) {
    throw Error(ErrorKind::LevelCapExceeded,
                base + "_" + std::to_string(n) + " beyond level cap " + std::to_string(options_.level_cap));
  }
  return *registry_->find(base, n);
}

SparsePoly ThetaPresentation::level(const std::string& base, unsigned n) const {
  return SparsePoly::generator(registry_, level_id(base, n), scalar(1), options_.degree_cap);
}

SparsePoly ThetaPresentation::constant(std::int64_t c) const {
  return SparsePoly::constant(registry_, scalar(c), options_.degree_cap);
}

const SparsePoly& ThetaPresentation::psi_image(GeneratorId g) const {
  if (auto it = psi_images_.find(g); it != psi_images_.end()) return it->second;
  if (owned_.count(g)) {
    throw Error(ErrorKind::LevelCapExceeded,
                "ψ^p(" + registry_->label(g) + ") needs a level beyond cap " + std::to_string(options_.level_cap));
  }
  throw Error(ErrorKind::InvalidArgument, registry_->label(g) + " is not a generator of this presentation");
}

SparsePoly ThetaPresentation::normal_form(const SparsePoly& a) const {
  if (!rules_) return a;
  return rules_->normal_form(a);
}

std::optional<std::pair<std::string, unsigned>> ThetaPresentation::locate(GeneratorId g) const {
  if (auto it = owned_.find(g); it != owned_.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------- elements

ThetaElement::ThetaElement(PresentationPtr presentation, SparsePoly value)
    : presentation_(std::move(presentation)), value_(std::move(value)) {
  if (value_.registry() != presentation_->registry()) {
    throw Error(ErrorKind::RegistryMismatch, "element and presentation use different registries");
  }
  value_ = presentation_->normal_form(value_);
}

namespace {

void check_same(const ThetaElement& a, const ThetaElement& b) {
  if (a.presentation() != b.presentation()) {
    throw Error(ErrorKind::RegistryMismatch, "elements of different θ-algebras");
  }
}

}  // namespace

ThetaElement operator+(const ThetaElement& a, const ThetaElement& b) {
  check_same(a, b);
  return {a.presentation_, a.value_ + b.value_};
}

ThetaElement operator-(const ThetaElement& a, const ThetaElement& b) {
  check_same(a, b);
  return {a.presentation_, a.value_ - b.value_};
}

ThetaElement operator*(const ThetaElement& a, const ThetaElement& b) {
  check_same(a, b);
  return {a.presentation_, a.value_ * b.value_};
}

ThetaElement ThetaElement::pow(std::uint64_t e) const {
  ThetaElement result = theta_constant(presentation_, 1);
  ThetaElement base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

ThetaElement theta_generator(const PresentationPtr& presentation, const std::string& base, unsigned n) {
  return {presentation, presentation->level(base, n)};
}

ThetaElement theta_constant(const PresentationPtr& presentation, std::int64_t c) {
  return {presentation, presentation->constant(c)};
}

// ---------------------------------------------------------------- operations

ThetaElement psi_p(const ThetaElement& a) {
  const auto& pres = *a.presentation();
  std::map<GeneratorId, SparsePoly> images;
  for (GeneratorId g : a.value().generators()) images.emplace(g, pres.psi_image(g));
  return {a.presentation(), substitute(a.value(), images)};
}

ThetaElement psi_p_power(const ThetaElement& a, unsigned n) {
  ThetaElement out = a;
  for (unsigned i = 0; i < n; ++i) out = psi_p(out);
  return out;
}

ThetaElement theta_op(const ThetaElement& a) {
  const SparsePoly diff = psi_p(a).value() - a.pow(a.presentation()->prime()).value();
  return {a.presentation(), diff.exact_div_p(1)};
}

ThetaElement theta_n(const ThetaElement& a, unsigned n) {
  const unsigned p = a.presentation()->prime();
  std::vector<ThetaElement> t{a};
  ThetaElement ghost = a;
  for (unsigned m = 1; m <= n; ++m) {
    ghost = psi_p(ghost);
    SparsePoly rhs = ghost.value();
    std::uint64_t e = p;
    for (int k = static_cast<int>(m) - 1; k >= 0; --k) {
      rhs -= t[static_cast<std::size_t>(k)].pow(e).value().mul_p_power(k);
      e *= p;
    }
    t.emplace_back(a.presentation(), rhs.exact_div_p(static_cast<int>(m)));
  }
  return t.back();
}

ThetaElement adams_action(const ThetaElement& a, const std::map<std::string, ThetaElement>& images) {
  const auto& pres = *a.presentation();
  PresentationPtr target;
  for (const auto& [base, img] : images) {
    if (!target) target = img.presentation();
    if (img.presentation() != target) throw Error(ErrorKind::RegistryMismatch, "Adams images in different algebras");
  }
  std::map<GeneratorId, SparsePoly> gen_images;
  for (GeneratorId g : a.value().generators()) {
    auto where = pres.locate(g);
    if (!where) throw Error(ErrorKind::InvalidArgument, pres.registry()->label(g) + " is not a generator here");
    auto it = images.find(where->first);
    if (it == images.end()) throw Error(ErrorKind::UnassignedGenerator, "no Adams image for " + where->first);
    gen_images.emplace(g, theta_n(it->second, where->second).value());
  }
  if (!target) target = a.presentation();
  return {target, substitute(a.value(), gen_images)};
}

PadicInt counit(const ThetaElement& a) { return a.value().constant_term(); }

// ---------------------------------------------------------------- coproduct

Coproduct::Coproduct(PresentationPtr source, std::string base, std::string left, std::string right)
    : source_(std::move(source)), base_(std::move(base)), left_(std::move(left)), right_(std::move(right)) {
  if (source_->is_related(base_)) throw Error(ErrorKind::InvalidArgument, "coproduct needs a free base");
  if (left_ == right_) throw Error(ErrorKind::InvalidArgument, "tensor factors need distinct names");
  const ThetaOptions& opt = source_->options();
  target_ = ThetaPresentation::free(source_->registry(), {left_, right_}, opt);

  const unsigned p = opt.prime;
  const unsigned K = opt.level_cap;
  const int W = opt.precision;
  const int hi = std::min(W + static_cast<int>(K), max_precision(p));
  const auto& reg = source_->registry();
  const PadicInt one_hi = PadicInt::one(p, hi);
  auto gen = [&](const std::string& name, unsigned n) {
    return SparsePoly::generator(reg, reg->intern(name, n), one_hi, opt.degree_cap);
  };

  std::vector<SparsePoly> solved;
  for (unsigned n = 0; n < K; ++n) {
    SparsePoly rhs(reg, p, hi, opt.degree_cap);
    std::uint64_t e = 1;
    for (int k = static_cast<int>(n); k >= 0; --k) {
      const auto uk = static_cast<unsigned>(k);
      rhs += (gen(left_, uk).pow(e) + gen(right_, uk).pow(e)).mul_p_power(k).reduce_precision(hi);
      e *= p;
    }
    e = p;
    for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
      rhs -= solved[static_cast<std::size_t>(k)].pow(e).mul_p_power(k).reduce_precision(hi);
      e *= p;
    }
    solved.push_back(rhs.exact_div_p(static_cast<int>(n)));
  }
  for (auto& s : solved) images_.push_back(s.reduce_precision(W));
}

ThetaElement Coproduct::apply(const ThetaElement& a) const {
  if (a.presentation() != source_) throw Error(ErrorKind::RegistryMismatch, "coproduct applied outside its source");
  std::map<GeneratorId, SparsePoly> images;
  for (GeneratorId g : a.value().generators()) {
    auto where = source_->locate(g);
    if (!where || where->first != base_) {
      throw Error(ErrorKind::InvalidArgument, source_->registry()->label(g) + " is not a level of " + base_);
    }
    images.emplace(g, images_.at(where->second));
  }
  return {target_, substitute(a.value(), images)};
}

SparsePoly Coproduct::rename(const SparsePoly& a, const std::string& from, const std::string& to,
                             const PresentationPtr& into) const {
  std::map<GeneratorId, SparsePoly> images;
  for (GeneratorId g : a.generators()) {
    const Generator info = a.registry()->at(g);
    if (info.name != from) {
      throw Error(ErrorKind::InvalidArgument, a.registry()->label(g) + " is not a level of " + from);
    }
    images.emplace(g, into->level(to, info.level));
  }
  return substitute(a, images).with_cap(into->options().degree_cap);
}

ThetaElement Coproduct::left(const ThetaElement& a) const { return {target_, rename(a.value(), base_, left_, target_)}; }

ThetaElement Coproduct::right(const ThetaElement& a) const {
  return {target_, rename(a.value(), base_, right_, target_)};
}

ThetaElement Coproduct::counit_left(const ThetaElement& t) const {
  std::map<GeneratorId, SparsePoly> images;
  for (GeneratorId g : t.value().generators()) {
    const Generator info = source_->registry()->at(g);
    images.emplace(g, info.name == left_ ? source_->zero() : source_->level(base_, info.level));
  }
  return {source_, substitute(t.value(), images)};
}

ThetaElement Coproduct::counit_right(const ThetaElement& t) const {
  std::map<GeneratorId, SparsePoly> images;
  for (GeneratorId g : t.value().generators()) {
    const Generator info = source_->registry()->at(g);
    images.emplace(g, info.name == right_ ? source_->zero() : source_->level(base_, info.level));
  }
  return {source_, substitute(t.value(), images)};
}

// ---------------------------------------------------------------- unit powers

int unit_power_tail_bound(unsigned p, int h_valuation, unsigned terms) {
  // v(binom(x, n) h^n) >= n v - v_p(n!) >= n v - floor((n-1)/(p-1)), nondecreasing in n.
  const int n = static_cast<int>(terms) + 1;
  return n * h_valuation - static_cast<int>((n - 1) / static_cast<int>(p - 1));
}

SparsePoly unit_power_series(const SparsePoly& h, const SparsePoly& x, unsigned terms) {
  const unsigned p = h.prime();
  SparsePoly result = x.constant_like(1);
  if (h.is_zero()) return result;
  int v = h.precision();
  for (const auto& [m, c] : h.terms()) v = std::min(v, c.valuation().value);
  const int needed = p == 2 ? 2 : 1;
  if (v < needed) {
    throw Error(ErrorKind::OutsideDomain, "(1+h)^x needs v_p(h) >= " + std::to_string(needed) + ", got " +
                                              h.render());
  }
  const int working = std::min(h.precision(), x.precision());
  if (working <= vp_factorial(p, terms)) {
    throw Error(ErrorKind::PrecisionExhausted,
                std::to_string(terms) + " binomial terms need more than " + std::to_string(working) + " digits");
  }
  SparsePoly numerator = result;
  SparsePoly h_power = result;
  PadicInt factorial_unit = PadicInt::one(p, working);
  for (unsigned n = 1; n <= terms; ++n) {
    numerator = numerator * (x - x.constant_like(static_cast<std::int64_t>(n - 1)));
    h_power = h_power * h;
    std::uint64_t u = n;
    while (u % p == 0) u /= p;
    factorial_unit *= PadicInt::from_residue(p, u, working);
    const SparsePoly shifted = (numerator * h_power).exact_div_p(vp_factorial(p, n));
    result += shifted.scale(unit_inverse(factorial_unit.reduce_to(std::min(working, shifted.floor_precision()))));
  }
  const int bound = unit_power_tail_bound(p, v, terms);
  if (bound < result.precision()) result = result.reduce_precision(bound);
  return result;
}

// ---------------------------------------------------------------- checks

namespace {

SparsePoly reduced_difference(const SparsePoly& lhs, const SparsePoly& rhs, const ModIdeal& ideal) {
  return reduce_mod(lhs - rhs, ideal);
}

ModIdeal ideal_below(const ThetaPresentation& pres, const std::string& base, unsigned levels) {
  ModIdeal ideal{1, {}};
  for (unsigned k = 0; k < levels; ++k) ideal.generators.insert(pres.level_id(base, k));
  return ideal;
}

ThetaElement f_element(const PresentationPtr& pres) {
  const ThetaElement b = theta_generator(pres, "b");
  return psi_p(b) - b;
}

}  // namespace

CheckResult f_congruence_check(unsigned i, const ThetaOptions& options) {
  if (i + 1 >= options.level_cap) {
    throw Error(ErrorKind::LevelCapExceeded, "f-congruence at level " + std::to_string(i) + " needs level cap > " +
                                                 std::to_string(i + 1));
  }
  auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, options);
  const ThetaElement fi = theta_n(f_element(pres), i);
  const ThetaElement bi = theta_generator(pres, "b", i);
  const ThetaElement expected = bi.pow(options.prime) - bi;
  const SparsePoly diff = reduced_difference(fi.value(), expected.value(), ideal_below(*pres, "b", i));
  if (!diff.is_zero()) return CheckResult::fail(diff.render());
  return CheckResult::ok();
}

CheckResult x_congruence_check(unsigned i, const ThetaOptions& options, const std::vector<PadicInt>& h) {
  if (i + 2 >= options.level_cap) {
    throw Error(ErrorKind::LevelCapExceeded, "x-congruence at level " + std::to_string(i) + " needs level cap > " +
                                                 std::to_string(i + 2));
  }
  if (!options.degree_cap && h.empty()) throw Error(ErrorKind::InsufficientInput, "h has no coefficients");
  auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b"}, options);
  const ThetaElement f = f_element(pres);

  // f has no constant term, so f^k vanishes under the cap once k > cap.
  std::size_t terms = h.size();
  if (options.degree_cap) terms = std::min<std::size_t>(terms, *options.degree_cap + 1);
  SparsePoly hf = pres->zero();
  SparsePoly f_power = pres->one();
  for (std::size_t k = 0; k < terms; ++k) {
    if (k > 0) f_power = f_power * f.value();
    hf += f_power.scale(h[k]);
  }
  const ThetaElement F = theta_op(f) - ThetaElement(pres, hf);
  const ThetaElement Fi = theta_n(F, i);
  const ThetaElement b_next = theta_generator(pres, "b", i + 1);
  const ThetaElement expected = b_next.pow(options.prime) - b_next;
  const SparsePoly diff = reduced_difference(Fi.value(), expected.value(), ideal_below(*pres, "b", i + 1));
  if (!diff.is_zero()) return CheckResult::fail(diff.render());
  return CheckResult::ok();
}

CheckResult ell_relation_check(const ThetaOptions& options) {
  if (options.level_cap < 2) throw Error(ErrorKind::LevelCapExceeded, "ℓ relation needs level cap >= 2");
  auto pres = ThetaPresentation::free(std::make_shared<Registry>(), {"b", "bbar"}, options);
  const ThetaElement b = theta_generator(pres, "b");
  const ThetaElement bbar = theta_generator(pres, "bbar");
  const ThetaElement ell = b - bbar;
  const ThetaElement lhs = psi_p(ell) - ell;
  const ThetaElement rhs = (psi_p(b) - b) - (psi_p(bbar) - bbar);
  const SparsePoly diff = lhs.value() - rhs.value();
  if (!diff.is_zero()) return CheckResult::fail(diff.render());
  return CheckResult::ok();
}

}  // namespace thetacalc
