#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "thetacalc/padic.hpp"

namespace thetacalc {

/// A named polynomial generator such as b_2 (name "b", level 2) or alpha_0.
struct Generator {
  std::string name;
  unsigned level = 0;
};

struct GeneratorId {
  std::uint32_t index = 0;
  auto operator<=>(const GeneratorId&) const = default;
};

/// Append-only table of generators shared by all polynomials over it.
/// Appends and lookups are internally synchronized.
class Registry {
 public:
  GeneratorId intern(const std::string& name, unsigned level);
  std::optional<GeneratorId> find(const std::string& name, unsigned level) const;
  Generator at(GeneratorId id) const;
  std::size_t size() const;
  std::string label(GeneratorId id) const;

  /// Stable total order: name-major, level-minor.
  bool display_less(GeneratorId a, GeneratorId b) const;

 private:
  mutable std::shared_mutex mutex_;
  std::deque<Generator> generators_;
  std::map<std::pair<std::string, unsigned>, GeneratorId> index_;
};

using RegistryPtr = std::shared_ptr<Registry>;

/// Sparse exponent vector, factors sorted by generator index.
class Monomial {
 public:
  struct Factor {
    std::uint32_t gen;
    std::uint32_t exp;
    bool operator==(const Factor&) const = default;
  };

  Monomial() = default;
  static Monomial of(GeneratorId g, std::uint32_t exp = 1);

  std::span<const Factor> factors() const { return {factors_.data(), factors_.size()}; }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(GeneratorId g) const;
  bool is_one() const { return factors_.empty(); }

  Monomial operator*(const Monomial& other) const;
  Monomial with_exponent(GeneratorId g, std::uint32_t exp) const;

  std::strong_ordering operator<=>(const Monomial& other) const;
  bool operator==(const Monomial& other) const { return factors_ == other.factors_; }

  std::size_t hash() const;

 private:
  boost::container::small_vector<Factor, 4> factors_;
  std::uint32_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

using DegreeCap = std::optional<unsigned>;

/// min of two caps, where "no cap" is infinite.
DegreeCap combine_caps(DegreeCap a, DegreeCap b);

/// Sparse multivariate polynomial with p-adic coefficients.
///
/// Terms are kept sorted with no zero coefficients and none above the degree
/// cap. Each coefficient carries its own precision; `floor_precision` is the
/// precision to which absent terms are known to vanish, so `precision()` is
/// the honest minimum over both.
class SparsePoly {
 public:
  using Term = std::pair<Monomial, PadicInt>;

  SparsePoly(RegistryPtr registry, unsigned prime, int precision, DegreeCap cap = {});

  static SparsePoly constant(RegistryPtr registry, const PadicInt& c, DegreeCap cap = {});
  static SparsePoly generator(RegistryPtr registry, GeneratorId g, const PadicInt& one, DegreeCap cap = {});
  static SparsePoly monomial(RegistryPtr registry, const Monomial& m, const PadicInt& c, DegreeCap cap = {});

  const RegistryPtr& registry() const { return registry_; }
  unsigned prime() const { return prime_; }
  DegreeCap degree_cap() const { return cap_; }
  int floor_precision() const { return floor_; }
  int precision() const;
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  PadicInt coefficient(const Monomial& m) const;
  PadicInt constant_term() const { return coefficient(Monomial{}); }
  unsigned total_degree() const;
  std::set<GeneratorId> generators() const;
  bool contains(GeneratorId g) const;

  SparsePoly operator-() const;
  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);

  SparsePoly scale(const PadicInt& c) const;
  SparsePoly pow(std::uint64_t e) const;
  SparsePoly one() const;
  SparsePoly zero() const;
  SparsePoly constant_like(const PadicInt& c) const;
  SparsePoly constant_like(std::int64_t c) const;

  SparsePoly with_cap(DegreeCap cap) const;
  SparsePoly reduce_precision(int precision) const;
  SparsePoly mul_p_power(int k) const;

  /// Coefficientwise division by p^k; NotDivisible names the first bad term.
  SparsePoly exact_div_p(int k) const;

  /// True iff a - b vanishes at the common precision.
  bool equals(const SparsePoly& other) const;

  /// Canonical rendering: name-major/level-minor monomial order, explicit
  /// balanced coefficients, trailing precision marker.
  std::string render() const;

  /// Inserts a term without normalizing; callers must call normalize().
  void add_term(const Monomial& m, const PadicInt& c);
  void normalize();

 private:
  void check_compatible(const SparsePoly& o) const;
  void merge(const SparsePoly& o, bool subtract);

  RegistryPtr registry_;
  unsigned prime_;
  int floor_;
  DegreeCap cap_;
  std::vector<Term> terms_;
};

std::string render_monomial(const Registry& registry, const Monomial& m);

/// Image of `a` under the ring map sending each generator in `images` to its
/// image and each generator in `fixed` to itself. Images must share one
/// registry; fixed generators require that registry to be `a`'s own.
SparsePoly substitute(const SparsePoly& a, const std::map<GeneratorId, SparsePoly>& images,
                      const std::set<GeneratorId>& fixed = {});

/// The ideal (p^e, S): generators in S are killed and coefficients reduced
/// modulo p^e.
struct ModIdeal {
  int p_exponent;
  std::set<GeneratorId> generators;
};

SparsePoly reduce_mod(const SparsePoly& a, const ModIdeal& ideal);

/// g^exponent -> replacement.
struct RewriteRule {
  GeneratorId generator;
  std::uint32_t exponent;
  SparsePoly replacement;
};

/// Terminating rewrite system. Each replacement must lower the exponent of its
/// own generator and may mention other rewritten generators only along an
/// acyclic dependency order; otherwise construction throws NonTerminating.
class RewriteSystem {
 public:
  explicit RewriteSystem(std::vector<RewriteRule> rules);

  const std::vector<RewriteRule>& rules() const { return rules_; }
  SparsePoly normal_form(const SparsePoly& a) const;

  /// Applies one applicable rule at one randomly chosen site, or returns
  /// nullopt when `a` is already normal.
  std::optional<SparsePoly> random_step(const SparsePoly& a, std::mt19937_64& rng) const;

 private:
  std::optional<std::size_t> applicable(const Monomial& m) const;
  SparsePoly apply(const Monomial& m, std::size_t rule_index, const SparsePoly& like) const;

  std::vector<RewriteRule> rules_;
};

SparsePoly rewrite_closure(const SparsePoly& a, std::vector<RewriteRule> rules);

}  // namespace thetacalc
