#pragma once

#include <string>
#include <vector>

#include "chanent/optimizer.hpp"

namespace chanent::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // worst observed deviation and counts
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs the listed criteria (all when empty) in ascending order.
std::vector<CriterionResult> run(const NumericPolicy& policy, const std::vector<int>& only = {});

/// "PASS   3  Reduction to states  (50 checks, worst deviation 1.0e-14)";
/// wall time is appended when with_time is set.
std::string format(const CriterionResult& result, bool with_time = false);

}  // namespace chanent::acceptance
