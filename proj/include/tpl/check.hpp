#pragma once

#include <string>
#include <vector>

namespace tpl {

/// A named residual compared against its threshold.
struct Check {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

inline Check make_check(std::string name, double residual, double threshold) {
  return Check{std::move(name), residual, threshold, residual <= threshold};
}

inline bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace tpl
