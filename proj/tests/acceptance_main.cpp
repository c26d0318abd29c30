#include <iostream>

#include "chanent/acceptance.hpp"

int main() {
  using namespace chanent;
  int failed = 0;
  for (const auto& r : acceptance::run(NumericPolicy{})) {
    std::cout << acceptance::format(r, true) << '\n';
    if (!r.passed) ++failed;
  }
  std::cout << (acceptance::kCriterionCount - failed) << '/' << acceptance::kCriterionCount << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
