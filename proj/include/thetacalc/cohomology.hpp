#pragma once

#include <string>
#include <vector>

#include "thetacalc/padic.hpp"

namespace thetacalc {

using Matrix = std::vector<std::vector<PadicInt>>;

Matrix identity_matrix(unsigned p, std::size_t n, int N);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix from_ints(unsigned p, int N, const std::vector<std::vector<std::int64_t>>& rows);

/// U A V = D over Z/p^N with D diagonal, each diagonal entry p^a or 0.
struct SmithForm {
  Matrix U, D, V;
  /// Valuations of the diagonal entries; N stands for a zero entry.
  std::vector<int> invariants;
};

SmithForm smith_normal_form(const Matrix& a, unsigned p, int N);

/// ψ^g acting on ⊕ Z/p^{torsion_i}. Entry (i, j) must carry Z/p^{e_j} into
/// Z/p^{e_i}, and the operator must be invertible mod p.
struct CyclicAction {
  unsigned p;
  int N;
  std::vector<int> torsion;
  Matrix op;
};

void validate(const CyclicAction& action);

/// ⊕ Z/p^{e_k}, with trivial factors dropped.
struct CohomologyGroup {
  unsigned p = 2;
  std::vector<int> exponents;

  bool is_zero() const { return exponents.empty(); }
  /// log_p of the order.
  int length() const;
  /// "Z/2^3 + Z/2" or "0".
  std::string render() const;
  bool operator==(const CohomologyGroup&) const = default;
};

struct Cohomology {
  CohomologyGroup h0, h1;
};

/// H^0 = ker(ψ^g - 1) and H^1 = coker(ψ^g - 1).
Cohomology h0_h1(const CyclicAction& action);

/// H^s; zero for s >= 2 since Z_p has cohomological dimension 1.
CohomologyGroup cohomology(const CyclicAction& action, unsigned s);

/// ψ^g on KO_t mod p^N, g = 3 at p = 2 and g = 2 at p = 3. On a degree
/// t = 4k the Bott class gives the unit g^{2k}; at p = 2 the η-classes in
/// degrees 8k+1, 8k+2 carry the trivial action on Z/2. Other degrees are zero.
CyclicAction ko_preset(unsigned p, int t, int N);

}  // namespace thetacalc
