// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <future>
#include <iostream>

#include "thetacalc/checks.hpp"
#include "thetacalc/error.hpp"

using namespace thetacalc;

namespace {

struct Run {
  std::string check;
  CheckParams params;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Run> runs;
  double time_limit_s = 0;
};

CheckParams at(unsigned p) {
  CheckParams c;
  c.prime = p;
  return c;
}

std::vector<Run> over(const std::string& check, std::initializer_list<unsigned> primes,
                      const std::function<void(CheckParams&)>& tweak = {}) {
  std::vector<Run> runs;
  for (unsigned p : primes) {
    CheckParams c = at(p);
    if (tweak) tweak(c);
    runs.push_back({check, c});
  }
  return runs;
}

std::vector<Run> join(std::initializer_list<std::vector<Run>> parts) {
  std::vector<Run> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

struct Verdict {
  bool pass = true;
  std::string detail;
  double seconds = 0;
};

Verdict evaluate(const Criterion& c) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& run : c.runs) {
    const CheckInfo* info = find_check(run.check);
    std::string where = run.check + " p=" + std::to_string(run.params.prime);
    try {
      const auto out = info->run(run.params);
      if (!out.result.pass) {
        v.pass = false;
        v.detail = where + ": " + out.result.witness;
        break;
      }
    } catch (const Error& e) {
      v.pass = false;
      v.detail = where + ": " + e.what();
      break;
    }
  }
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (v.pass && c.time_limit_s > 0 && v.seconds > c.time_limit_s) {
    v.pass = false;
    v.detail = "took " + std::to_string(v.seconds) + " s";
  }
  return v;
}

}  // namespace

int main() {
  const auto n10 = [](CheckParams& c) { c.precision = 10; };
  const std::vector<Criterion> criteria{
      {1, "f-congruence for i <= 2", over("f-congruence", {2, 3, 5}), 10.0},
      {2, "q-expansion congruence f = j^-1 mod p", over("qexp-congruence", {2, 3})},
      {3, "h integral, x-congruence for i <= 1",
       join({over("h-integrality", {2, 3}), over("x-congruence", {2, 3}), over("alpha-invertibility", {2, 3})})},
      {4, "Hopkins mistake images vanish", over("hopkins-mistake", {2, 3})},
      {5, "pi(b_n) = alpha_n mod p", over("pi-digits", {2, 3})},
      {6, "section and Hopf structure",
       join({over("section-comultiplicative", {2, 3}), over("witt-comultiplication", {2, 3})})},
      {7, "ell relation and antidiagonal", join({over("ell-relation", {2, 3, 5}), over("antidiagonal", {2, 3})})},
      {8, "theta and lambda property suites",
       join({over("theta-axioms", {2, 3}), over("cartan", {2, 3}), over("lambda-binomial", {2, 3, 5})})},
      {9, "cohomology presets and Smith form", join({over("cohomology-presets", {2}, n10), over("cohomology-presets", {3})})},
      {10, "Mahler integrity", over("mahler-roundtrip", {2, 3, 5})},
  };

  std::vector<std::future<Verdict>> pending;
  for (const auto& c : criteria) pending.push_back(std::async(std::launch::async, evaluate, std::cref(c)));

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Verdict v = pending[i].get();
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << criteria[i].id << " " << criteria[i].title;
    if (!v.pass) std::cout << " -- " << v.detail;
    std::cout << "\n";
  }
  return all ? 0 : 1;
}
