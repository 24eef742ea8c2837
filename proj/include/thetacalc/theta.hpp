#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thetacalc/check.hpp"
#include "thetacalc/poly.hpp"

namespace thetacalc {

struct ThetaOptions {
  unsigned prime = 2;
  /// Number of materialized levels: generators b_0 .. b_{level_cap-1}.
  unsigned level_cap = 4;
  DegreeCap degree_cap;
  /// Working digits, guard included.
  int precision = 20;
};

/// Guard digits charged by checks: level_cap + v_p(degree_cap!).
int guard_digits(const ThetaOptions& options);

class ThetaPresentation;
using PresentationPtr = std::shared_ptr<const ThetaPresentation>;

/// A θ-algebra presented on named base generators. The generator b_n of a
/// free base is θ_n(b) in the ghost sense:
///
///   ψ^{p^n}(b) = b^{p^n} + p b_1^{p^{n-1}} + ... + p^n b_n.
///
/// A base may instead carry a relation θ(f) = r; then only its level 0 is a
/// polynomial generator and ψ^p(f) = f^p + p r.
class ThetaPresentation {
 public:
  static PresentationPtr free(RegistryPtr registry, std::vector<std::string> bases, ThetaOptions options);

  /// `relations` maps a base name to the image of θ on it. Replacements may
  /// only mention level-0 generators of related bases.
  static PresentationPtr with_relations(RegistryPtr registry, std::vector<std::string> bases,
                                        std::map<std::string, SparsePoly> relations, ThetaOptions options);

  const RegistryPtr& registry() const { return registry_; }
  const ThetaOptions& options() const { return options_; }
  unsigned prime() const { return options_.prime; }
  int precision() const { return options_.precision; }
  const std::vector<std::string>& bases() const { return bases_; }
  bool is_related(const std::string& base) const { return related_.count(base) > 0; }

  /// Throws LevelCapExceeded when n >= level_cap.
  GeneratorId level_id(const std::string& base, unsigned n) const;
  SparsePoly level(const std::string& base, unsigned n) const;

  PadicInt scalar(std::int64_t c) const { return PadicInt::from_int(prime(), c, precision()); }
  SparsePoly constant(std::int64_t c) const;
  SparsePoly zero() const { return constant(0); }
  SparsePoly one() const { return constant(1); }

  /// ψ^p of a generator of this presentation.
  const SparsePoly& psi_image(GeneratorId g) const;

  SparsePoly normal_form(const SparsePoly& a) const;

  /// Base name and level of a generator, if it belongs here.
  std::optional<std::pair<std::string, unsigned>> locate(GeneratorId g) const;

 private:
  ThetaPresentation(RegistryPtr registry, std::vector<std::string> bases, ThetaOptions options);
  void build(std::map<std::string, SparsePoly> relations);

  RegistryPtr registry_;
  std::vector<std::string> bases_;
  ThetaOptions options_;
  std::map<std::string, SparsePoly> related_;
  std::map<GeneratorId, std::pair<std::string, unsigned>> owned_;
  std::map<GeneratorId, SparsePoly> psi_images_;
  std::optional<RewriteSystem> rules_;
};

/// Element of a presented θ-algebra, kept in normal form.
class ThetaElement {
 public:
  ThetaElement(PresentationPtr presentation, SparsePoly value);

  const PresentationPtr& presentation() const { return presentation_; }
  const SparsePoly& value() const { return value_; }

  ThetaElement operator-() const { return {presentation_, -value_}; }
  friend ThetaElement operator+(const ThetaElement& a, const ThetaElement& b);
  friend ThetaElement operator-(const ThetaElement& a, const ThetaElement& b);
  friend ThetaElement operator*(const ThetaElement& a, const ThetaElement& b);
  ThetaElement pow(std::uint64_t e) const;
  ThetaElement scale(const PadicInt& c) const { return {presentation_, value_.scale(c)}; }

  bool is_zero() const { return value_.is_zero(); }
  bool equals(const ThetaElement& other) const { return value_.equals(other.value_); }
  std::string render() const { return value_.render(); }

 private:
  PresentationPtr presentation_;
  SparsePoly value_;
};

ThetaElement theta_generator(const PresentationPtr& presentation, const std::string& base, unsigned n = 0);
ThetaElement theta_constant(const PresentationPtr& presentation, std::int64_t c);

/// Frobenius lift ψ^p. Throws LevelCapExceeded on the top level.
ThetaElement psi_p(const ThetaElement& a);
ThetaElement psi_p_power(const ThetaElement& a, unsigned n);

/// θ(a) = (ψ^p(a) - a^p) / p.
ThetaElement theta_op(const ThetaElement& a);

/// θ_n(a) from p^n θ_n(a) = ψ^{p^n}(a) - Σ_{k<n} p^k θ_k(a)^{p^{n-k}}.
ThetaElement theta_n(const ThetaElement& a, unsigned n);

/// The ring map commuting with θ that sends each base b to images[b];
/// it sends b_n to θ_n(images[b]).
ThetaElement adams_action(const ThetaElement& a, const std::map<std::string, ThetaElement>& images);

/// Witt comultiplication on a free base, realized in the free algebra on
/// two copies of it: Δ(b_n) solves Σ p^k Δ(b_k)^{p^{n-k}} = w_n(b) + w_n(b').
class Coproduct {
 public:
  Coproduct(PresentationPtr source, std::string base, std::string left, std::string right);

  const PresentationPtr& source() const { return source_; }
  const PresentationPtr& target() const { return target_; }
  const std::string& left_name() const { return left_; }
  const std::string& right_name() const { return right_; }

  /// Δ(b_n), n < level_cap.
  const SparsePoly& image(unsigned n) const { return images_.at(n); }

  ThetaElement apply(const ThetaElement& a) const;
  /// a ⊗ 1 and 1 ⊗ a.
  ThetaElement left(const ThetaElement& a) const;
  ThetaElement right(const ThetaElement& a) const;
  /// (ε ⊗ 1) and (1 ⊗ ε), landing back in the source.
  ThetaElement counit_left(const ThetaElement& t) const;
  ThetaElement counit_right(const ThetaElement& t) const;

 private:
  SparsePoly rename(const SparsePoly& a, const std::string& from, const std::string& to,
                    const PresentationPtr& into) const;

  PresentationPtr source_;
  PresentationPtr target_;
  std::string base_;
  std::string left_;
  std::string right_;
  std::vector<SparsePoly> images_;
};

/// Counit ε: every generator to 0.
PadicInt counit(const ThetaElement& a);

/// Σ_{n<=terms} binom(x, n) h^n, i.e. (1+h)^x truncated. Needs v_p(h) >= 1
/// (>= 2 at p = 2). The result's precision also covers the discarded tail.
SparsePoly unit_power_series(const SparsePoly& h, const SparsePoly& x, unsigned terms);

/// Lower bound on the valuation of every term beyond `terms`.
int unit_power_tail_bound(unsigned p, int h_valuation, unsigned terms);

/// θ_i(ψ^p(b) - b) ≡ b_i^p - b_i mod (p, b_0, ..., b_{i-1}). Needs i + 1 < level_cap.
CheckResult f_congruence_check(unsigned i, const ThetaOptions& options);

/// With F(x) = θ(f) - h(f): θ_i(F(x)) ≡ b_{i+1}^p - b_{i+1} mod (p, b_0, ..., b_i).
/// `h` holds the coefficients of h as a power series. Needs i + 2 < level_cap.
CheckResult x_congruence_check(unsigned i, const ThetaOptions& options, const std::vector<PadicInt>& h);

/// ψ^p(b - b̄) - (b - b̄) = (ψ^p(b) - b) - (ψ^p(b̄) - b̄) in T(b, b̄).
CheckResult ell_relation_check(const ThetaOptions& options);

}  // namespace thetacalc
