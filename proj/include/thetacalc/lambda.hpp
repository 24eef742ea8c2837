#pragma once

#include <span>
#include <vector>

#include "thetacalc/theta.hpp"

namespace thetacalc {

/// λ^0 .. λ^n by Newton's identity
///
///   n λ^n = Σ_{i=1}^n (-1)^{i-1} λ^{n-i} ψ^i,
///
/// with the leaky Adams structure: ψ^k = id for k prime to p and
/// ψ^{u p^j} = (ψ^p)^j. On Z_p every ψ^k is the identity and λ^n(x) is
/// binom(x, n). Each division by n is audited; the precision cost of λ^n is
/// v_p(n!) digits.
std::vector<PadicInt> lambda_sequence(const PadicInt& x, unsigned n);
std::vector<ThetaElement> lambda_sequence(const ThetaElement& x, unsigned n);

PadicInt lambda_n(const PadicInt& x, unsigned n);
ThetaElement lambda_n(const ThetaElement& x, unsigned n);

/// Σ_{i+j=n} λ^i(x) λ^j(y), i.e. λ^n(x + y). Lists must hold λ^0 .. λ^n.
PadicInt cartan_product(std::span<const PadicInt> lams_x, std::span<const PadicInt> lams_y, unsigned n);
ThetaElement cartan_product(std::span<const ThetaElement> lams_x, std::span<const ThetaElement> lams_y, unsigned n);

}  // namespace thetacalc
