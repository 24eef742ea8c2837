#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thetacalc/check.hpp"

namespace thetacalc {

struct CheckParams {
  unsigned prime = 2;
  int precision = 12;
  unsigned degree_cap = 24;
  unsigned theta_levels = 4;
  std::size_t q_terms = 64;
  unsigned lambda_max = 8;
  unsigned trials = 200;
  std::uint64_t seed = 1;
};

/// A check's verdict plus the canonical data pinned by its golden file.
struct CheckOutcome {
  CheckResult result;
  std::map<std::string, std::string> data;
};

struct CheckInfo {
  std::string name;
  std::vector<unsigned> primes;
  CheckOutcome (*run)(const CheckParams&);

  bool supports(unsigned p) const;
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& name);

}  // namespace thetacalc
