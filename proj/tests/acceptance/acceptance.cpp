// Runs every acceptance suite and prints one PASS/FAIL line per criterion,
// preceded by the individual checks that make it up.
#include <chrono>
#include <cstring>
#include <iostream>

#include "freezetree/verify.hpp"

using namespace freezetree;

int main(int argc, char** argv) {
  VerifyOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
    else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) opt.seed = std::stoull(argv[++i]);
  }
  struct Criterion {
    int id;
    const char* suite;
    const char* title;
  };
  const Criterion criteria[] = {
      {1, "exact", "exact laws of both constructions for n <= 6"},
      {2, "bijection", "bijection round trips and tangent-number counts"},
      {3, "height", "uniform attachment depth and height, n = 10^6"},
      {4, "linear", "linear regime p = 0.75, n = 10^5"},
      {5, "fc", "f(c) solver accuracy"},
      {6, "sir", "SIR infection trees and fluid limit"},
      {7, "perf", "linear-time builders at n = 10^7"},
      {8, "determinism", "identical statistics for any thread count"},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_suite(c.suite, opt);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    for (const auto& check : r.checks) {
      std::cout << "  " << (check.pass ? "ok   " : "FAIL ") << check.name;
      if (!check.detail.empty()) std::cout << ": " << check.detail;
      std::cout << '\n';
    }
    std::cout << (r.pass() ? "PASS" : "FAIL") << " criterion " << c.id << " [" << c.suite << "] " << c.title << " ("
              << static_cast<int>(dt.count() + 0.5) << " s)" << std::endl;
    failed += r.pass() ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << '\n';
  return failed == 0 ? 0 : 1;
}
