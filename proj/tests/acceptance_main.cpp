// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "orbitflow/verify.hpp"

int main(int argc, char** argv) {
  orbitflow::VerifyOptions opt;
  opt.seed = 1;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--seed=", 0) == 0) opt.seed = std::strtoull(arg.c_str() + 7, nullptr, 10);
    else if (arg.rfind("--criterion=", 0) == 0)
      opt.criteria.push_back(std::atoi(arg.c_str() + 12));
  }

  int failures = 0;
  auto results = orbitflow::run_acceptance(opt);
  for (const auto& r : results) {
    std::printf("%s  criterion %2d: %s (measured %.3e, threshold %.3e)\n",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.threshold);
    if (!r.detail.empty()) std::printf("      %s\n", r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, results.size());
  return failures;
}
