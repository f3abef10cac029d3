#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace freezetree {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  // Deterministic summary of everything the suite measured. Wall-clock
  // figures are kept in `timings` so that `stats` can be compared byte for
  // byte across runs.
  nlohmann::json stats = nlohmann::json::object();
  nlohmann::json timings = nlohmann::json::object();

  bool pass() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  unsigned threads = 0;
  // Smaller sizes for smoke runs; the thresholds do not change.
  bool quick = false;
  // Called with progress messages; may be empty.
  std::function<void(const std::string&)> log;
};

// exact, bijection, fc, height, linear, sir, perf, determinism
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const VerifyOptions& options);

SuiteResult verify_exact(const VerifyOptions& options);
SuiteResult verify_bijection(const VerifyOptions& options);
SuiteResult verify_fc(const VerifyOptions& options);
SuiteResult verify_height(const VerifyOptions& options);
SuiteResult verify_linear(const VerifyOptions& options);
SuiteResult verify_sir(const VerifyOptions& options);
SuiteResult verify_perf(const VerifyOptions& options);
SuiteResult verify_determinism(const VerifyOptions& options);

// Reference value of f(1/2), frozen from an independent bisection.
inline constexpr double kFcHalf = 2.36026230491334228;

}  // namespace freezetree
