#include "thetacalc/cohomology.hpp"

#include <algorithm>
#include <sstream>

namespace thetacalc {

namespace {

int valuation_of(const PadicInt& x) { return x.is_zero() ? x.precision() : x.valuation().value; }

/// x / p^a for x divisible by p^a, lifted back to precision N.
PadicInt shift_down(const PadicInt& x, int a) {
  return PadicInt::from_residue(x.prime(), x.residue() / prime_power(x.prime(), a), x.precision());
}

void add_row_multiple(Matrix& m, std::size_t dst, std::size_t src, const PadicInt& c) {
  for (std::size_t j = 0; j < m[dst].size(); ++j) m[dst][j] -= c * m[src][j];
}

void add_col_multiple(Matrix& m, std::size_t dst, std::size_t src, const PadicInt& c) {
  for (auto& row : m) row[dst] -= c * row[src];
}

CohomologyGroup group_from(unsigned p, std::vector<int> exps) {
  exps.erase(std::remove(exps.begin(), exps.end(), 0), exps.end());
  std::sort(exps.begin(), exps.end(), std::greater<>());
  return {p, exps};
}

}  // namespace

Matrix identity_matrix(unsigned p, std::size_t n, int N) {
  Matrix m(n, std::vector<PadicInt>(n, PadicInt::zero(p, N)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = PadicInt::one(p, N);
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  if (a[0].size() != k) throw Error(ErrorKind::InvalidArgument, "matrix shapes do not compose");
  Matrix c(n, std::vector<PadicInt>(m, PadicInt::zero(a[0][0].prime(), std::min(a[0][0].precision(), b[0][0].precision()))));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  }
  return c;
}

Matrix from_ints(unsigned p, int N, const std::vector<std::vector<std::int64_t>>& rows) {
  Matrix m;
  for (const auto& r : rows) {
    std::vector<PadicInt> row;
    for (auto x : r) row.push_back(PadicInt::from_int(p, x, N));
    m.push_back(std::move(row));
  }
  return m;
}

SmithForm smith_normal_form(const Matrix& a, unsigned p, int N) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  SmithForm s{identity_matrix(p, rows, N), Matrix(rows), identity_matrix(p, cols, N), {}};
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i].size() != cols) throw Error(ErrorKind::InvalidArgument, "ragged matrix");
    for (const auto& x : a[i]) s.D[i].push_back(x.reduce_to(N));
  }
  Matrix& d = s.D;
  const std::size_t r = std::min(rows, cols);
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t pi = k, pj = k;
    int best = N;
    for (std::size_t i = k; i < rows; ++i) {
      for (std::size_t j = k; j < cols; ++j) {
        const int v = valuation_of(d[i][j]);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    }
    if (best == N) {
      s.invariants.push_back(N);
      continue;
    }
    std::swap(d[pi], d[k]);
    std::swap(s.U[pi], s.U[k]);
    for (auto& row : d) std::swap(row[pj], row[k]);
    for (auto& row : s.V) std::swap(row[pj], row[k]);

    // Normalize the pivot to p^best with a unit row scaling.
    const PadicInt u = unit_inverse(shift_down(d[k][k], best));
    for (auto& x : d[k]) x *= u;
    for (auto& x : s.U[k]) x *= u;

    for (std::size_t i = 0; i < rows; ++i) {
      if (i == k || d[i][k].is_zero()) continue;
      const PadicInt c = shift_down(d[i][k], best);
      add_row_multiple(d, i, k, c);
      add_row_multiple(s.U, i, k, c);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (j == k || d[k][j].is_zero()) continue;
      const PadicInt c = shift_down(d[k][j], best);
      add_col_multiple(d, j, k, c);
      add_col_multiple(s.V, j, k, c);
    }
    s.invariants.push_back(best);
  }
  return s;
}

void validate(const CyclicAction& a) {
  const std::size_t r = a.torsion.size();
  if (a.op.size() != r) throw Error(ErrorKind::InvalidArgument, "operator size differs from module rank");
  for (std::size_t i = 0; i < r; ++i) {
    if (a.torsion[i] < 1 || a.torsion[i] > a.N) throw Error(ErrorKind::InvalidArgument, "torsion exponent out of range");
    if (a.op[i].size() != r) throw Error(ErrorKind::InvalidArgument, "operator is not square");
    for (std::size_t j = 0; j < r; ++j) {
      const int gap = a.torsion[i] - a.torsion[j];
      if (gap > 0 && valuation_of(a.op[i][j]) < gap) {
        throw Error(ErrorKind::InvalidArgument, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") is not defined on the torsion module");
      }
    }
  }
  if (r == 0) return;
  const SmithForm s = smith_normal_form(a.op, a.p, 1);
  for (int v : s.invariants) {
    if (v != 0) throw Error(ErrorKind::NotAUnit, "ψ^g is not invertible mod p");
  }
}

int CohomologyGroup::length() const {
  int n = 0;
  for (int e : exponents) n += e;
  return n;
}

std::string CohomologyGroup::render() const {
  if (exponents.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    os << (i ? " + " : "") << "Z/" << p;
    if (exponents[i] != 1) os << '^' << exponents[i];
  }
  return os.str();
}

namespace {

/// coker of B on ⊕ Z/p^{e_i}: Smith form of [B | diag(p^{e_i})].
CohomologyGroup cokernel(const Matrix& b, const std::vector<int>& e, unsigned p, int N) {
  const std::size_t r = e.size();
  Matrix m(r);
  for (std::size_t i = 0; i < r; ++i) {
    m[i] = b[i];
    for (std::size_t j = 0; j < r; ++j) {
      m[i].push_back(i == j ? PadicInt::one(p, N).mul_p_power(e[i]).reduce_to(N) : PadicInt::zero(p, N));
    }
  }
  const SmithForm s = smith_normal_form(m, p, N);
  return group_from(p, s.invariants);
}

}  // namespace

Cohomology h0_h1(const CyclicAction& a) {
  validate(a);
  const std::size_t r = a.torsion.size();
  const unsigned p = a.p;
  const int N = a.N;
  Matrix b = a.op;
  for (std::size_t i = 0; i < r; ++i) b[i][i] -= PadicInt::one(p, N);

  // ker B is dual to coker of the dual map, whose (j, i) entry is b_ij p^{e_j - e_i}.
  Matrix dual(r, std::vector<PadicInt>(r, PadicInt::zero(p, N)));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const int gap = a.torsion[j] - a.torsion[i];
      const PadicInt x = b[i][j].reduce_to(N);
      dual[j][i] = gap >= 0 ? x.mul_p_power(gap).reduce_to(N) : shift_down(x, -gap);
    }
  }
  return {cokernel(dual, a.torsion, p, N), cokernel(b, a.torsion, p, N)};
}

CohomologyGroup cohomology(const CyclicAction& action, unsigned s) {
  if (s == 0) return h0_h1(action).h0;
  if (s == 1) return h0_h1(action).h1;
  validate(action);
  return {action.p, {}};
}

CyclicAction ko_preset(unsigned p, int t, int N) {
  if (p != 2 && p != 3) throw Error(ErrorKind::UnsupportedPrime, "KO presets exist at p = 2, 3");
  if (N < 1 || N > max_precision(p)) throw Error(ErrorKind::PrecisionOverflow, std::to_string(N) + " digits");
  const int r = ((t % 8) + 8) % 8;
  if (r % 4 == 0) {
    const PadicInt g = PadicInt::from_int(p, p == 2 ? 3 : 2, N);
    const PadicInt unit = g.pow(static_cast<std::uint64_t>(std::abs(t / 2)));
    return {p, N, {N}, {{t >= 0 ? unit : unit_inverse(unit)}}};
  }
  if (p == 2 && (r == 1 || r == 2)) return {p, N, {1}, {{PadicInt::one(p, N)}}};
  return {p, N, {}, {}};
}

}  // namespace thetacalc
