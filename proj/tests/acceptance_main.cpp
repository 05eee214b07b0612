#include <cstdio>

#include "netent/acceptance.hpp"

int main() {
  int failures = 0;
  for (int id = 1; id <= netent::kCriterionCount; ++id) {
    const auto result = netent::run_criterion(id);
    std::printf("%s\n", netent::format_result(result).c_str());
    std::fflush(stdout);
    if (!result.passed) ++failures;
  }
  std::printf("%d/%d criteria passed\n", netent::kCriterionCount - failures, netent::kCriterionCount);
  return failures == 0 ? 0 : 1;
}
