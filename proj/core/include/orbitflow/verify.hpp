#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orbitflow {

/// One verified identity: what was measured against which bound.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::vector<int> criteria;  // empty = all
};

/// Runs the selected acceptance criteria (1..15) and reports one result each.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt);

/// Criterion ids belonging to a named suite (all, recursion, closedform,
/// embeddings, vmkdv, devmap, lambda, curveflow, hfm, conservation, lax,
/// gradient, backlund, finitetype, ukinv, skew). Throws on unknown names.
std::vector<int> criteria_for_suite(const std::string& suite);

}  // namespace orbitflow
