#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace netent {

struct AcceptanceOptions {
  std::uint64_t seed = 20240101;
  // Negative control: nudges one off-diagonal entry of every single-particle
  // chain before it is checked, which must fail the ergodicity criterion.
  bool perturb_chain = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

inline constexpr int kCriterionCount = 9;

// Runs one criterion (1..kCriterionCount). Exceptions thrown by the checked
// code are reported as failures, not propagated.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

// "PASS  3  quantum consensus flow  (12.3 s / 60 s)  detail".
std::string format_result(const CriterionResult& r);

}  // namespace netent
