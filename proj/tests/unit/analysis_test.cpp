#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tpl/analysis.hpp"
#include "tpl/random.hpp"

using namespace tpl;
using namespace tpl::testing;

TEST(AnalyzePair, SixtyDegrees) {
  const TwoProjectionAnalysis a = analyze_pair(line(0), line(kPi / 3));
  EXPECT_NEAR(a.distance.distance, kPi / 3, 1e-12);
  EXPECT_TRUE(a.geometry_available);
  EXPECT_TRUE(a.crimmins.is_product);
  EXPECT_EQ(a.difference_vectors.size(), 2u);
  EXPECT_EQ(a.exponent_vectors.size(), 2u);
  for (const auto& c : a.checks) EXPECT_TRUE(c.pass) << c.name;
}

TEST(AnalyzePair, RandomPairsCertify) {
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = uniform_index(2, 20, rng);
    const Projection p = random_projection(n, uniform_index(0, n, rng), rng);
    const Projection q = random_projection(n, uniform_index(0, n, rng), rng);
    const TwoProjectionAnalysis a = analyze_pair(p, q);
    EXPECT_EQ(a.intersections, intersection_dims_direct(p, q));
    for (const auto& c : a.checks) EXPECT_TRUE(c.pass) << c.name << " n=" << n;
  }
}

TEST(AnalyzePair, SharedSubspaceAndOrthogonalParts) {
  const Projection p = diag_projection({1, 1, 0, 0});
  const Projection q = diag_projection({1, 0, 1, 0});
  const TwoProjectionAnalysis a = analyze_pair(p, q);
  EXPECT_EQ(a.intersections, (IntersectionDims{1, 1, 1, 1}));
  EXPECT_TRUE(a.distance.degenerate);
  EXPECT_NEAR(a.distance.distance, kPi / 2, 1e-15);
}

TEST(AnalyzePair, VectorsCanBeSkipped) {
  AnalysisOptions o;
  o.with_vectors = false;
  const TwoProjectionAnalysis a = analyze_pair(line(0), line(0.4), {}, o);
  EXPECT_TRUE(a.difference_vectors.empty());
  EXPECT_TRUE(a.exponent_vectors.empty());
}
