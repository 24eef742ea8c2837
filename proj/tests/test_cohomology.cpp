#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "thetacalc/cohomology.hpp"

using namespace thetacalc;
using boost::multiprecision::cpp_int;

namespace {

cpp_int det(std::vector<std::vector<cpp_int>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  cpp_int total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<cpp_int>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<cpp_int> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(m[i][j]);
      }
      minor.push_back(row);
    }
    total += (c % 2 ? -1 : 1) * m[0][c] * det(minor);
  }
  return total;
}

int val(cpp_int x, unsigned p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariants from determinantal divisors of the integer lift.
std::vector<int> divisor_oracle(const Matrix& a, unsigned p, int N) {
  const std::size_t n = a.size();
  const int cap = 1000;
  std::vector<int> delta{0};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<std::size_t>> sets;
    std::vector<std::size_t> cur;
    subsets(n, k, 0, cur, sets);
    int best = cap;
    for (const auto& rs : sets) {
      for (const auto& cs : sets) {
        std::vector<std::vector<cpp_int>> m;
        for (auto i : rs) {
          std::vector<cpp_int> row;
          for (auto j : cs) row.push_back(cpp_int(a[i][j].residue()));
          m.push_back(row);
        }
        best = std::min(best, val(det(m), p, cap));
      }
    }
    delta.push_back(best);
  }
  std::vector<int> inv;
  for (std::size_t k = 1; k <= n; ++k) inv.push_back(delta[k] >= cap ? N : std::min(delta[k] - delta[k - 1], N));
  return inv;
}

bool is_diagonal(const Matrix& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d[i].size(); ++j) {
      if (i != j && !d[i][j].is_zero()) return false;
    }
  }
  return true;
}

bool unit_det(const Matrix& m, unsigned p) {
  std::vector<std::vector<cpp_int>> z;
  for (const auto& row : m) {
    std::vector<cpp_int> r;
    for (const auto& x : row) r.push_back(cpp_int(x.residue()));
    z.push_back(r);
  }
  return det(z) % p != 0;
}

}  // namespace

TEST_CASE("smith normal form examples") {
  auto s = smith_normal_form(from_ints(2, 8, {{2}}), 2, 8);
  CHECK(s.invariants == std::vector<int>{1});
  CHECK(s.D[0][0].residue() == 2);
  s = smith_normal_form(identity_matrix(3, 3, 5), 3, 5);
  CHECK(s.invariants == std::vector<int>{0, 0, 0});
  CHECK(s.D == identity_matrix(3, 3, 5));
  CHECK(smith_normal_form(from_ints(2, 8, {{0}}), 2, 8).invariants == std::vector<int>{8});
}

TEST_CASE("smith normal form on random matrices") {
  std::mt19937_64 rng(12);
  const unsigned p = 2;
  const int N = 10;
  std::uniform_int_distribution<std::uint64_t> entry(0, prime_power(p, N) - 1);
  std::uniform_int_distribution<int> shift(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a(4);
    for (auto& row : a) {
      for (int j = 0; j < 4; ++j) row.push_back(PadicInt::from_residue(p, entry(rng), N).mul_p_power(shift(rng)).reduce_to(N));
    }
    const auto s = smith_normal_form(a, p, N);
    CHECK(multiply(multiply(s.U, a), s.V) == s.D);
    CHECK(is_diagonal(s.D));
    CHECK(unit_det(s.U, p));
    CHECK(unit_det(s.V, p));
    auto inv = s.invariants;
    std::sort(inv.begin(), inv.end());
    CHECK(inv == divisor_oracle(a, p, N));
  }
}

TEST_CASE("cohomology of cyclic actions") {
  for (unsigned p : {2u, 3u}) {
    const int N = 8;
    const auto c = h0_h1(ko_preset(p, 0, N));
    CHECK(c.h0 == CohomologyGroup{p, {N}});
    CHECK(c.h1 == CohomologyGroup{p, {N}});
  }
  const auto ko4 = h0_h1(ko_preset(2, 4, 12));
  CHECK(ko4.h1.render() == "Z/2^3");
  CHECK(ko4.h0.render() == "Z/2^3");
  CHECK(h0_h1(ko_preset(2, 8, 12)).h1.render() == "Z/2^4");
  CHECK(h0_h1(ko_preset(2, 1, 12)).h1.render() == "Z/2");
  CHECK(h0_h1(ko_preset(2, 2, 12)).h0.render() == "Z/2");
  CHECK(h0_h1(ko_preset(2, 3, 12)).h1.is_zero());

  const auto ko4_3 = ko_preset(3, 4, 10);
  CHECK(ko4_3.op[0][0].residue() == 4);
  CHECK(h0_h1(ko4_3).h1.render() == "Z/3");
  CHECK(h0_h1(ko_preset(3, 8, 10)).h1.render() == "Z/3");
  CHECK(h0_h1(ko_preset(3, 12, 10)).h1.render() == "Z/3^2");
  CHECK(h0_h1(ko_preset(3, 2, 10)).h1.is_zero());

  const CyclicAction unit{5, 6, {6}, from_ints(5, 6, {{3}})};
  CHECK(h0_h1(unit).h0.is_zero());
  CHECK(h0_h1(unit).h1.is_zero());
  CHECK_THROWS_AS(h0_h1(CyclicAction{3, 4, {4}, from_ints(3, 4, {{3}})}), Error);
  CHECK_THROWS_AS(ko_preset(5, 0, 4), Error);

  for (unsigned p : {2u, 3u}) {
    for (int t = 0; t < 16; ++t) {
      const auto a = ko_preset(p, t, 10);
      CHECK(cohomology(a, 2).is_zero());
      CHECK(cohomology(a, 3).is_zero());
      CHECK(cohomology(a, 0).length() == cohomology(a, 1).length());
    }
  }
}

TEST_CASE("cohomology is a conjugation invariant") {
  std::mt19937_64 rng(13);
  for (unsigned p : {2u, 3u}) {
    const int N = 8;
    std::uniform_int_distribution<std::int64_t> small(-9, 9);
    std::uniform_int_distribution<std::size_t> idx(0, 2);
    for (int trial = 0; trial < 20; ++trial) {
      // 1 + p·(random) is invertible mod p, so ψ^g stays an automorphism.
      Matrix op(3);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          op[i].push_back(PadicInt::from_int(p, (i == j ? 1 : 0) + static_cast<std::int64_t>(p) * small(rng), N));
        }
      }
      Matrix P = identity_matrix(p, 3, N), Pinv = identity_matrix(p, 3, N);
      for (int step = 0; step < 6; ++step) {
        const std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        const std::int64_t c = small(rng);
        Matrix e = identity_matrix(p, 3, N), einv = identity_matrix(p, 3, N);
        e[i][j] = PadicInt::from_int(p, c, N);
        einv[i][j] = PadicInt::from_int(p, -c, N);
        P = multiply(e, P);
        Pinv = multiply(Pinv, einv);
      }
      const CyclicAction a{p, N, {N, N, N}, op};
      const CyclicAction b{p, N, {N, N, N}, multiply(multiply(P, op), Pinv)};
      CHECK(h0_h1(a).h0 == h0_h1(b).h0);
      CHECK(h0_h1(a).h1 == h0_h1(b).h1);
    }
  }

  const CyclicAction mixed{2, 6, {6, 2}, from_ints(2, 6, {{1, 16}, {1, 3}})};
  const auto c = h0_h1(mixed);
  CHECK(c.h0.length() == c.h1.length());
}
