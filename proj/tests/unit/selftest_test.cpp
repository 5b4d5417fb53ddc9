#include <gtest/gtest.h>

#include "tpl/selftest.hpp"

using namespace tpl;

namespace {

SelftestOptions small() {
  SelftestOptions o;
  o.seed = 3;
  o.pairs = 20;
  o.non_products = 10;
  o.idempotents = 10;
  o.d1_cases = 10;
  o.halmos_cases = 10;
  o.concentration_cases = 5;
  return o;
}

}  // namespace

TEST(Selftest, SmallRunPasses) {
  const auto suites = run_selftest(small());
  ASSERT_EQ(suites.size(), 9u);
  for (const auto& s : suites) {
    EXPECT_TRUE(s.pass()) << s.name << ": " << (s.notes.empty() ? "" : s.notes[0]);
    EXPECT_GT(s.cases, 0) << s.name;
  }
}

TEST(Selftest, Deterministic) {
  const auto a = spectral_correspondence_suite(small());
  const auto b = spectral_correspondence_suite(small());
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].residual, b.checks[i].residual) << a.checks[i].name;
  }
}

TEST(Selftest, CrimminsRejectsNonProducts) {
  const SuiteResult r = crimmins_suite(small());
  bool saw_rejection_check = false;
  for (const auto& c : r.checks) {
    if (c.name == "non_product_residual_min") {
      saw_rejection_check = true;
      EXPECT_GT(c.residual, 1e-3);
    }
  }
  EXPECT_TRUE(saw_rejection_check);
}
