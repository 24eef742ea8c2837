#include "thetacalc/poly.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace thetacalc {

// ---------------------------------------------------------------- Registry

GeneratorId Registry::intern(const std::string& name, unsigned level) {
  std::unique_lock lock(mutex_);
  auto key = std::make_pair(name, level);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  GeneratorId id{static_cast<std::uint32_t>(generators_.size())};
  generators_.push_back(Generator{name, level});
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<GeneratorId> Registry::find(const std::string& name, unsigned level) const {
  std::shared_lock lock(mutex_);
  if (auto it = index_.find({name, level}); it != index_.end()) return it->second;
  return std::nullopt;
}

Generator Registry::at(GeneratorId id) const {
  std::shared_lock lock(mutex_);
  return generators_.at(id.index);
}

std::size_t Registry::size() const {
  std::shared_lock lock(mutex_);
  return generators_.size();
}

std::string Registry::label(GeneratorId id) const {
  const Generator g = at(id);
  return g.name + "_" + std::to_string(g.level);
}

bool Registry::display_less(GeneratorId a, GeneratorId b) const {
  const Generator ga = at(a);
  const Generator gb = at(b);
  if (ga.name != gb.name) return ga.name < gb.name;
  return ga.level < gb.level;
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(GeneratorId g, std::uint32_t exp) {
  Monomial m;
  if (exp > 0) {
    m.factors_.push_back({g.index, exp});
    m.degree_ = exp;
  }
  return m;
}

std::uint32_t Monomial::exponent(GeneratorId g) const {
  for (const auto& f : factors_) {
    if (f.gen == g.index) return f.exp;
    if (f.gen > g.index) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.degree_ = degree_ + other.degree_;
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->gen < b->gen)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->gen < a->gen) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.push_back({a->gen, a->exp + b->exp});
      ++a;
      ++b;
    }
  }
  return out;
}

Monomial Monomial::with_exponent(GeneratorId g, std::uint32_t exp) const {
  Monomial out;
  bool placed = false;
  for (const auto& f : factors_) {
    if (!placed && f.gen >= g.index) {
      if (exp > 0) out.factors_.push_back({g.index, exp});
      placed = true;
      if (f.gen == g.index) continue;
    }
    out.factors_.push_back(f);
  }
  if (!placed && exp > 0) out.factors_.push_back({g.index, exp});
  out.degree_ = 0;
  for (const auto& f : out.factors_) out.degree_ += f.exp;
  return out;
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
  const std::size_t n = std::min(factors_.size(), other.factors_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = factors_[i].gen <=> other.factors_[i].gen; c != 0) return c;
    if (auto c = factors_[i].exp <=> other.factors_[i].exp; c != 0) return c;
  }
  return factors_.size() <=> other.factors_.size();
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& f : factors_) {
    h ^= (static_cast<std::size_t>(f.gen) << 20) ^ f.exp;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 29;
  }
  return h;
}

DegreeCap combine_caps(DegreeCap a, DegreeCap b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

// ---------------------------------------------------------------- SparsePoly

SparsePoly::SparsePoly(RegistryPtr registry, unsigned prime, int precision, DegreeCap cap)
    : registry_(std::move(registry)), prime_(prime), floor_(precision), cap_(cap) {
  if (!registry_) throw Error(ErrorKind::InvalidArgument, "polynomial needs a registry");
  (void)prime_power(prime, precision);
}

SparsePoly SparsePoly::constant(RegistryPtr registry, const PadicInt& c, DegreeCap cap) {
  return monomial(std::move(registry), Monomial{}, c, cap);
}

SparsePoly SparsePoly::generator(RegistryPtr registry, GeneratorId g, const PadicInt& one, DegreeCap cap) {
  return monomial(std::move(registry), Monomial::of(g), one, cap);
}

SparsePoly SparsePoly::monomial(RegistryPtr registry, const Monomial& m, const PadicInt& c, DegreeCap cap) {
  SparsePoly out(std::move(registry), c.prime(), c.precision(), cap);
  out.add_term(m, c);
  out.normalize();
  return out;
}

int SparsePoly::precision() const {
  int prec = floor_;
  for (const auto& [m, c] : terms_) prec = std::min(prec, c.precision());
  return prec;
}

PadicInt SparsePoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.first < key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return PadicInt::zero(prime_, floor_);
}

unsigned SparsePoly::total_degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max<unsigned>(d, m.degree());
  return d;
}

std::set<GeneratorId> SparsePoly::generators() const {
  std::set<GeneratorId> out;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m.factors()) out.insert(GeneratorId{f.gen});
  }
  return out;
}

bool SparsePoly::contains(GeneratorId g) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.first.exponent(g) > 0; });
}

void SparsePoly::check_compatible(const SparsePoly& o) const {
  if (registry_ != o.registry_) throw Error(ErrorKind::RegistryMismatch, "polynomials over different registries");
  if (prime_ != o.prime_) throw Error(ErrorKind::PrimeMismatch, "polynomials over different primes");
}

void SparsePoly::add_term(const Monomial& m, const PadicInt& c) { terms_.emplace_back(m, c); }

void SparsePoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (cap_ && t.first.degree() > *cap_) continue;
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.second.is_zero(); });
  terms_ = std::move(out);
}

void SparsePoly::merge(const SparsePoly& o, bool subtract) {
  check_compatible(o);
  cap_ = combine_caps(cap_, o.cap_);
  floor_ = std::min(floor_, o.floor_);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  auto push = [&](const Monomial& m, const PadicInt& c) {
    if (c.is_zero()) return;
    if (cap_ && m.degree() > *cap_) return;
    out.emplace_back(m, c);
  };
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      push(a->first, a->second);
      ++a;
    } else if (a == terms_.end() || b->first < a->first) {
      push(b->first, subtract ? -b->second : b->second);
      ++b;
    } else {
      push(a->first, subtract ? a->second - b->second : a->second + b->second);
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  merge(o, false);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  merge(o, true);
  return *this;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  a.check_compatible(b);
  SparsePoly out(a.registry_, a.prime_, std::min(a.floor_, b.floor_), combine_caps(a.cap_, b.cap_));
  if (a.terms_.empty() || b.terms_.empty()) return out;

  // Sort the second factor by degree so the cap prunes the inner loop.
  std::vector<const SparsePoly::Term*> rhs;
  rhs.reserve(b.terms_.size());
  for (const auto& t : b.terms_) rhs.push_back(&t);
  std::stable_sort(rhs.begin(), rhs.end(),
                   [](const auto* x, const auto* y) { return x->first.degree() < y->first.degree(); });

  std::unordered_map<Monomial, PadicInt, MonomialHash> acc;
  acc.reserve(a.terms_.size() * 4 + b.terms_.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto* tb : rhs) {
      if (out.cap_ && ma.degree() + tb->first.degree() > *out.cap_) break;
      Monomial m = ma * tb->first;
      PadicInt c = ca * tb->second;
      auto [it, inserted] = acc.try_emplace(std::move(m), c);
      if (!inserted) it->second += c;
    }
  }
  out.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (!c.is_zero()) out.terms_.emplace_back(m, c);
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const SparsePoly::Term& x, const SparsePoly::Term& y) { return x.first < y.first; });
  return out;
}

SparsePoly SparsePoly::scale(const PadicInt& c) const {
  SparsePoly out(registry_, prime_, std::min(floor_, c.precision()), cap_);
  for (const auto& [m, x] : terms_) {
    PadicInt y = x * c;
    if (!y.is_zero()) out.terms_.emplace_back(m, y);
  }
  return out;
}

SparsePoly SparsePoly::pow(std::uint64_t e) const {
  SparsePoly result = one();
  SparsePoly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

SparsePoly SparsePoly::one() const { return constant_like(1); }

SparsePoly SparsePoly::zero() const { return SparsePoly(registry_, prime_, floor_, cap_); }

SparsePoly SparsePoly::constant_like(const PadicInt& c) const { return constant(registry_, c, cap_); }

SparsePoly SparsePoly::constant_like(std::int64_t c) const {
  return constant(registry_, PadicInt::from_int(prime_, c, floor_), cap_);
}

SparsePoly SparsePoly::with_cap(DegreeCap cap) const {
  SparsePoly out = *this;
  out.cap_ = cap;
  if (cap) std::erase_if(out.terms_, [&](const Term& t) { return t.first.degree() > *cap; });
  return out;
}

SparsePoly SparsePoly::reduce_precision(int precision) const {
  SparsePoly out(registry_, prime_, std::min(floor_, precision), cap_);
  for (const auto& [m, c] : terms_) {
    PadicInt r = c.reduce_to(std::min(c.precision(), precision));
    if (!r.is_zero()) out.terms_.emplace_back(m, r);
  }
  return out;
}

SparsePoly SparsePoly::mul_p_power(int k) const {
  SparsePoly out(registry_, prime_, std::min(floor_ + k, max_precision(prime_)), cap_);
  for (const auto& [m, c] : terms_) out.terms_.emplace_back(m, c.mul_p_power(k));
  return out;
}

SparsePoly SparsePoly::exact_div_p(int k) const {
  if (floor_ <= k) {
    throw Error(ErrorKind::PrecisionExhausted,
                "dividing a polynomial by p^" + std::to_string(k) + " at precision " + std::to_string(floor_));
  }
  SparsePoly out(registry_, prime_, floor_ - k, cap_);
  for (const auto& [m, c] : terms_) {
    try {
      PadicInt q = thetacalc::exact_div_p(c, k);
      if (!q.is_zero()) out.terms_.emplace_back(m, q);
    } catch (const Error& e) {
      throw Error(e.kind(), "term " + render_monomial(*registry_, m) + " of " + render() + ": " + e.what());
    }
  }
  return out;
}

bool SparsePoly::equals(const SparsePoly& other) const { return (*this - other).is_zero(); }

std::string render_monomial(const Registry& registry, const Monomial& m) {
  if (m.is_one()) return "1";
  std::vector<Monomial::Factor> fs(m.factors().begin(), m.factors().end());
  std::sort(fs.begin(), fs.end(), [&](const auto& a, const auto& b) {
    return registry.display_less(GeneratorId{a.gen}, GeneratorId{b.gen});
  });
  std::string out;
  for (const auto& f : fs) {
    if (!out.empty()) out += "*";
    out += registry.label(GeneratorId{f.gen});
    if (f.exp > 1) out += "^" + std::to_string(f.exp);
  }
  return out;
}

namespace {

// Display order: walk generators name-major/level-minor; the monomial with
// the larger exponent at the first difference comes first.
bool display_before(const Registry& registry, const Monomial& a, const Monomial& b) {
  auto sorted = [&](const Monomial& m) {
    std::vector<Monomial::Factor> fs(m.factors().begin(), m.factors().end());
    std::sort(fs.begin(), fs.end(), [&](const auto& x, const auto& y) {
      return registry.display_less(GeneratorId{x.gen}, GeneratorId{y.gen});
    });
    return fs;
  };
  const auto fa = sorted(a);
  const auto fb = sorted(b);
  std::size_t i = 0;
  while (i < fa.size() && i < fb.size()) {
    if (fa[i].gen != fb[i].gen) {
      return registry.display_less(GeneratorId{fa[i].gen}, GeneratorId{fb[i].gen});
    }
    if (fa[i].exp != fb[i].exp) return fa[i].exp > fb[i].exp;
    ++i;
  }
  return fa.size() > fb.size();
}

}  // namespace

std::string SparsePoly::render() const {
  std::vector<const Term*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [&](const Term* a, const Term* b) { return display_before(*registry_, a->first, b->first); });
  std::ostringstream os;
  bool first = true;
  for (const Term* t : order) {
    const std::int64_t c = t->second.balanced();
    if (first) {
      os << c;
    } else {
      os << (c < 0 ? " - " : " + ") << (c < 0 ? -c : c);
    }
    if (!t->first.is_one()) os << "*" << render_monomial(*registry_, t->first);
    first = false;
  }
  if (first) os << "0";
  os << " + O(" << prime_ << "^" << precision() << ")";
  return os.str();
}

// ---------------------------------------------------------------- substitute

SparsePoly substitute(const SparsePoly& a, const std::map<GeneratorId, SparsePoly>& images,
                      const std::set<GeneratorId>& fixed) {
  RegistryPtr target = a.registry();
  DegreeCap cap = a.degree_cap();
  int floor = a.floor_precision();
  bool first = true;
  for (const auto& [g, img] : images) {
    if (first) {
      target = img.registry();
      first = false;
    } else if (img.registry() != target) {
      throw Error(ErrorKind::RegistryMismatch, "substitution images over different registries");
    }
    if (img.prime() != a.prime()) throw Error(ErrorKind::PrimeMismatch, "substitution image over another prime");
    cap = combine_caps(cap, img.degree_cap());
    floor = std::min(floor, img.floor_precision());
  }
  if (!fixed.empty() && target != a.registry()) {
    throw Error(ErrorKind::RegistryMismatch, "fixed generators need the source registry as target");
  }

  SparsePoly one = SparsePoly::constant(target, PadicInt::one(a.prime(), floor), cap);
  std::map<GeneratorId, SparsePoly> resolved;
  for (GeneratorId g : a.generators()) {
    if (auto it = images.find(g); it != images.end()) {
      resolved.emplace(g, it->second.with_cap(cap));
    } else if (fixed.count(g)) {
      resolved.emplace(g, SparsePoly::generator(target, g, PadicInt::one(a.prime(), floor), cap));
    } else {
      throw Error(ErrorKind::UnassignedGenerator, a.registry()->label(g) + " has no image");
    }
  }

  // Powers of images, memoized per generator.
  std::map<std::pair<std::uint32_t, std::uint32_t>, SparsePoly> powers;
  auto power = [&](std::uint32_t gen, std::uint32_t exp) -> const SparsePoly& {
    auto key = std::make_pair(gen, exp);
    if (auto it = powers.find(key); it != powers.end()) return it->second;
    const SparsePoly& base = resolved.at(GeneratorId{gen});
    SparsePoly value = exp == 1 ? base : (exp % 2 == 0 ? [&] {
      std::uint32_t half = exp / 2;
      SparsePoly h = base.pow(half);
      return h * h;
    }()
                                                           : base.pow(exp));
    return powers.emplace(key, std::move(value)).first->second;
  };

  // Prefix products shared between terms sorted lexicographically.
  std::map<Monomial, SparsePoly> prefixes;
  SparsePoly out(target, a.prime(), floor, cap);
  for (const auto& [m, c] : a.terms()) {
    SparsePoly value = one;
    Monomial prefix;
    for (const auto& f : m.factors()) {
      Monomial next = prefix * Monomial::of(GeneratorId{f.gen}, f.exp);
      if (auto it = prefixes.find(next); it != prefixes.end()) {
        value = it->second;
      } else {
        value = value * power(f.gen, f.exp);
        prefixes.emplace(next, value);
      }
      prefix = std::move(next);
      if (value.is_zero()) break;
    }
    out += value.scale(c);
  }
  return out;
}

// ---------------------------------------------------------------- reduce_mod

SparsePoly reduce_mod(const SparsePoly& a, const ModIdeal& ideal) {
  SparsePoly out(a.registry(), a.prime(), std::min(a.floor_precision(), ideal.p_exponent), a.degree_cap());
  for (const auto& [m, c] : a.terms()) {
    bool killed = false;
    for (const auto& f : m.factors()) {
      if (ideal.generators.count(GeneratorId{f.gen})) {
        killed = true;
        break;
      }
    }
    if (killed) continue;
    out.add_term(m, c.reduce_to(std::min(c.precision(), ideal.p_exponent)));
  }
  out.normalize();
  return out;
}

// ---------------------------------------------------------------- rewriting

RewriteSystem::RewriteSystem(std::vector<RewriteRule> rules) : rules_(std::move(rules)) {
  std::map<std::uint32_t, std::size_t> by_gen;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& r = rules_[i];
    if (r.exponent == 0) throw Error(ErrorKind::NonTerminating, "rule with exponent 0");
    if (!by_gen.emplace(r.generator.index, i).second) {
      throw Error(ErrorKind::NonTerminating, "two rules for one generator");
    }
  }
  // Self exponent must drop; dependencies between rewritten generators must
  // be acyclic.
  std::map<std::uint32_t, std::set<std::uint32_t>> deps;
  for (const auto& r : rules_) {
    for (const auto& [m, c] : r.replacement.terms()) {
      if (m.exponent(r.generator) >= r.exponent) {
        throw Error(ErrorKind::NonTerminating,
                    "replacement for " + r.replacement.registry()->label(r.generator) + " does not lower its exponent");
      }
      for (const auto& f : m.factors()) {
        if (f.gen != r.generator.index && by_gen.count(f.gen)) deps[r.generator.index].insert(f.gen);
      }
    }
  }
  std::map<std::uint32_t, int> state;  // 0 new, 1 active, 2 done
  std::function<void(std::uint32_t)> visit = [&](std::uint32_t g) {
    if (state[g] == 2) return;
    if (state[g] == 1) throw Error(ErrorKind::NonTerminating, "cyclic rewrite dependencies");
    state[g] = 1;
    for (auto h : deps[g]) visit(h);
    state[g] = 2;
  };
  for (const auto& r : rules_) visit(r.generator.index);
}

std::optional<std::size_t> RewriteSystem::applicable(const Monomial& m) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (m.exponent(rules_[i].generator) >= rules_[i].exponent) return i;
  }
  return std::nullopt;
}

SparsePoly RewriteSystem::apply(const Monomial& m, std::size_t rule_index, const SparsePoly& like) const {
  const auto& r = rules_[rule_index];
  const Monomial rest = m.with_exponent(r.generator, m.exponent(r.generator) - r.exponent);
  SparsePoly cofactor = SparsePoly::monomial(like.registry(), rest, PadicInt::one(like.prime(), like.floor_precision()),
                                             like.degree_cap());
  return cofactor * r.replacement.with_cap(like.degree_cap());
}

SparsePoly RewriteSystem::normal_form(const SparsePoly& a) const {
  for (const auto& r : rules_) {
    if (r.replacement.registry() != a.registry()) throw Error(ErrorKind::RegistryMismatch, "rewrite rule registry");
  }
  std::map<Monomial, SparsePoly> memo;
  std::function<SparsePoly(const Monomial&)> nf = [&](const Monomial& m) -> SparsePoly {
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    SparsePoly result = SparsePoly::monomial(a.registry(), m, PadicInt::one(a.prime(), a.floor_precision()),
                                             a.degree_cap());
    if (auto rule = applicable(m)) {
      const SparsePoly once = apply(m, *rule, a);
      result = once.zero();
      for (const auto& [m2, c2] : once.terms()) result += nf(m2).scale(c2);
    }
    memo.emplace(m, result);
    return result;
  };
  SparsePoly out = a.zero();
  for (const auto& [m, c] : a.terms()) out += nf(m).scale(c);
  return out;
}

std::optional<SparsePoly> RewriteSystem::random_step(const SparsePoly& a, std::mt19937_64& rng) const {
  std::vector<std::pair<std::size_t, std::size_t>> sites;  // (term, rule)
  for (std::size_t t = 0; t < a.terms().size(); ++t) {
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      if (a.terms()[t].first.exponent(rules_[r].generator) >= rules_[r].exponent) sites.emplace_back(t, r);
    }
  }
  if (sites.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  const auto [t, r] = sites[pick(rng)];
  const auto& [m, c] = a.terms()[t];
  SparsePoly out = a - SparsePoly::monomial(a.registry(), m, c, a.degree_cap());
  out += apply(m, r, a).scale(c);
  return out;
}

SparsePoly rewrite_closure(const SparsePoly& a, std::vector<RewriteRule> rules) {
  return RewriteSystem(std::move(rules)).normal_form(a);
}

}  // namespace thetacalc
