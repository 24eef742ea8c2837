// thetacalc: runs named verification checks and reports their outcome.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "thetacalc/checks.hpp"
#include "thetacalc/error.hpp"

namespace fs = std::filesystem;
using namespace thetacalc;

namespace {

constexpr const char* kVersion = "1.0.0";

enum class Status { Pass, Fail, Error, Skipped };

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

struct Entry {
  std::string name;
  Status status = Status::Pass;
  std::string witness;
  long long millis = 0;
  std::map<std::string, std::string> data;
};

std::string golden_name(const std::string& check, const CheckParams& c) {
  return check + "_p" + std::to_string(c.prime) + "_M" + std::to_string(c.q_terms) + "_N" + std::to_string(c.precision) +
         ".golden";
}

std::string golden_text(const Entry& e) {
  std::map<std::string, std::string> lines = e.data;
  lines["status"] = status_name(e.status);
  std::string out;
  for (const auto& [k, v] : lines) out += k + "=" + v + "\n";
  return out;
}

std::string first_difference(const std::string& want, const std::string& got) {
  std::istringstream a(want), b(got);
  std::string la, lb;
  while (true) {
    const bool ha = static_cast<bool>(std::getline(a, la));
    const bool hb = static_cast<bool>(std::getline(b, lb));
    if (!ha && !hb) return "trailing newline";
    if (!ha) return "unexpected line " + lb;
    if (!hb) return "missing line " + la;
    if (la != lb) return "expected " + la + " got " + lb;
  }
}

Entry run_one(const CheckInfo& info, const CheckParams& params) {
  Entry e{info.name};
  const auto start = std::chrono::steady_clock::now();
  try {
    CheckOutcome out = info.run(params);
    e.status = out.result.pass ? Status::Pass : Status::Fail;
    e.witness = out.result.witness;
    e.data = std::move(out.data);
  } catch (const Error& err) {
    e.status = Status::Error;
    e.witness = err.what();
  }
  e.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return e;
}

void apply_golden(Entry& e, const CheckParams& params, const fs::path& dir, bool regenerate) {
  if (e.status == Status::Skipped || e.status == Status::Error) return;
  const fs::path file = dir / golden_name(e.name, params);
  const std::string text = golden_text(e);
  if (regenerate) {
    std::ofstream(file, std::ios::binary) << text;
    return;
  }
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    e.status = Status::Error;
    e.witness = "missing golden file " + file.filename().string();
    return;
  }
  std::stringstream want;
  want << in.rdbuf();
  if (want.str() != text && e.status == Status::Pass) {
    e.status = Status::Fail;
    e.witness = "golden mismatch in " + file.filename().string() + ": " + first_difference(want.str(), text);
  }
}

nlohmann::ordered_json params_json(const CheckParams& c) {
  return {{"prime", c.prime},         {"precision", c.precision}, {"degree_cap", c.degree_cap},
          {"theta_levels", c.theta_levels}, {"q_terms", c.q_terms}, {"lambda_max", c.lambda_max},
          {"trials", c.trials},       {"seed", c.seed}};
}

void print_structured(const std::vector<Entry>& entries, const CheckParams& params, bool timing) {
  nlohmann::ordered_json report;
  report["version"] = kVersion;
  report["params"] = params_json(params);
  report["checks"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json j{{"name", e.name}, {"status", status_name(e.status)}};
    if (!e.witness.empty()) j["witness"] = e.witness;
    j["millis"] = timing ? e.millis : 0;
    report["checks"].push_back(std::move(j));
  }
  std::cout << report.dump(2) << "\n";
}

void print_text(const std::vector<Entry>& entries, const CheckParams& params, bool timing) {
  std::cout << "thetacalc " << kVersion << "  p=" << params.prime << " N=" << params.precision
            << " D=" << params.degree_cap << " K=" << params.theta_levels << " M=" << params.q_terms
            << " lambda<=" << params.lambda_max << " trials=" << params.trials << " seed=" << params.seed << "\n";
  int counts[4] = {0, 0, 0, 0};
  for (const auto& e : entries) {
    ++counts[static_cast<int>(e.status)];
    std::string tag = status_name(e.status);
    for (auto& ch : tag) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    std::cout << tag << std::string(9 - tag.size(), ' ') << e.name;
    if (timing) std::cout << "  (" << e.millis << " ms)";
    std::cout << "\n";
    if (!e.witness.empty()) std::cout << "         witness: " << e.witness << "\n";
  }
  std::cout << counts[0] << " passed, " << counts[1] << " failed, " << counts[2] << " errors, " << counts[3]
            << " skipped\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification harness for θ-algebra, Mahler, q-series and cohomology computations"};
  CheckParams params;
  std::string checks = "all";
  std::string format = "text";
  std::string golden;
  bool regenerate = false;
  bool no_timing = false;
  bool list = false;

  app.add_option("--prime", params.prime, "Prime p")->check(CLI::IsMember({2u, 3u, 5u}));
  app.add_option("--precision", params.precision, "Digit precision N")->check(CLI::Range(1, 40));
  app.add_option("--degree-cap", params.degree_cap, "Polynomial degree cap D")->check(CLI::Range(1u, 64u));
  app.add_option("--theta-levels", params.theta_levels, "θ-level cap K")->check(CLI::Range(1u, 6u));
  app.add_option("--q-terms", params.q_terms, "q-expansion precision M")->check(CLI::Range(std::size_t{2}, std::size_t{512}));
  app.add_option("--lambda-max", params.lambda_max, "Largest λ/binomial index")->check(CLI::Range(0u, 32u));
  app.add_option("--trials", params.trials, "Randomized instances per property check");
  app.add_option("--seed", params.seed, "Random seed");
  app.add_option("--check", checks, "Comma-separated check names, or all");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--golden", golden, "Golden file directory");
  app.add_flag("--regenerate-golden", regenerate, "Rewrite golden files instead of comparing");
  app.add_flag("--no-timing", no_timing, "Omit wall times so reports are byte-identical");
  app.add_flag("--list", list, "List the available checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list) {
    for (const auto& c : check_registry()) {
      std::cout << c.name << "  p in {";
      for (std::size_t i = 0; i < c.primes.size(); ++i) std::cout << (i ? "," : "") << c.primes[i];
      std::cout << "}\n";
    }
    return 0;
  }
  if (regenerate && golden.empty()) {
    std::cerr << "--regenerate-golden requires --golden DIR\n";
    return 2;
  }
  if (!golden.empty() && !regenerate && !fs::is_directory(golden)) {
    std::cerr << "golden directory " << golden << " does not exist\n";
    return 2;
  }
  if (regenerate) fs::create_directories(golden);

  std::vector<std::pair<const CheckInfo*, bool>> selected;
  if (checks == "all") {
    for (const auto& c : check_registry()) selected.emplace_back(&c, c.supports(params.prime));
  } else {
    std::stringstream ss(checks);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const CheckInfo* info = find_check(name);
      if (!info) {
        std::cerr << "unknown check: " << name << "\n";
        return 2;
      }
      if (!info->supports(params.prime)) {
        std::cerr << name << " is not available at p = " << params.prime << "\n";
        return 2;
      }
      selected.emplace_back(info, true);
    }
  }

  std::vector<std::future<Entry>> pending;
  for (const auto& [info, run] : selected) {
    if (run) {
      pending.push_back(std::async(std::launch::async, run_one, std::cref(*info), std::cref(params)));
    } else {
      std::promise<Entry> skipped;
      skipped.set_value(Entry{info->name, Status::Skipped, "not available at p = " + std::to_string(params.prime)});
      pending.push_back(skipped.get_future());
    }
  }
  std::vector<Entry> entries;
  for (auto& f : pending) {
    entries.push_back(f.get());
    if (!golden.empty()) apply_golden(entries.back(), params, golden, regenerate);
  }

  if (format == "structured") {
    print_structured(entries, params, !no_timing);
  } else {
    print_text(entries, params, !no_timing);
  }
  for (const auto& e : entries) {
    if (e.status == Status::Fail || e.status == Status::Error) return 1;
  }
  return 0;
}
