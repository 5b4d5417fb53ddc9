#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpl/check.hpp"
#include "tpl/numerics.hpp"

namespace tpl {

/// Outcome of one randomized invariant suite. `checks` holds the worst
/// residual seen for each property, against its threshold.
struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::vector<Check> checks;
  std::vector<std::string> notes;  // first few failing cases

  bool pass() const { return failures == 0 && all_pass(checks); }
};

struct SelftestOptions {
  std::uint64_t seed = 42;
  int pairs = 200;            // random projection pairs, dims 2..32
  int non_products = 50;      // Gaussian matrices for the Crimmins rejection test
  int idempotents = 50;       // random B for the pseudoinverse suite
  int d1_cases = 50;          // random invertible B, dims <= 16
  int halmos_cases = 50;      // random contractions
  int concentration_cases = 20;
};

SuiteResult spectral_correspondence_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult biorthogonality_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult sum_correspondence_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult crimmins_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult geodesic_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult idempotent_distance_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult pseudoinverse_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult halmos_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});
SuiteResult concentration_trace_suite(const SelftestOptions& o, const TolerancePolicy& tol = {});

/// All of the above, in that order.
std::vector<SuiteResult> run_selftest(const SelftestOptions& o, const TolerancePolicy& tol = {});

}  // namespace tpl
