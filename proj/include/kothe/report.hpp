#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kothe {

/// Outcome of one randomized property check.
struct PropertyCheck {
  PropertyCheck() = default;
  explicit PropertyCheck(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool passed = true;
  double worst_slack = 0.0;  // largest violation observed; <= 0 means none
  std::string witness;       // the worst violating input, if any
  double statistic = 0.0;    // check-specific empirical constant (c1, c, ...)
};

struct CheckReport {
  std::vector<PropertyCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const PropertyCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace kothe
