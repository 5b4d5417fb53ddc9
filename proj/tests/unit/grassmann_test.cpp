#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tpl/grassmann.hpp"
#include "tpl/random.hpp"

using namespace tpl;
using namespace tpl::testing;

TEST(GenericPart, OrthogonalAxesAreDegenerate) {
  const GenericPartDecomposition g = generic_part(diag_projection({1, 0}), diag_projection({0, 1}));
  EXPECT_EQ(g.dim(), 0);
  EXPECT_EQ(g.plus_part_dim, 1);
  EXPECT_EQ(g.minus_part_dim, 1);
}

TEST(GenericPart, SixtyDegreesIsGeneric) {
  const GenericPartDecomposition g = generic_part(line(0), line(kPi / 3));
  EXPECT_EQ(g.dim(), 2);
  EXPECT_EQ(g.degenerate_frame.cols(), 0);
}

TEST(GenericPart, BlockSum) {
  const Projection p(block_diag(diag_projection({1, 0}).matrix(), line(0).matrix()));
  const Projection q(block_diag(diag_projection({0, 1}).matrix(), line(kPi / 3).matrix()));
  const GenericPartDecomposition g = generic_part(p, q);
  EXPECT_EQ(g.dim(), 2);
  EXPECT_EQ(g.plus_part_dim, 1);
  EXPECT_EQ(g.minus_part_dim, 1);
  EXPECT_LT(g.restriction_residual, 1e-10);
}

TEST(DavisSymmetry, EqualLines) {
  const Projection p = diag_projection({1, 0});
  const ComplexMatrix v = davis_symmetry(generic_part(p, p));
  // P' = Q' = diag(1, 0) in its own coordinates, so V = 2P' - 1.
  const GenericPartDecomposition g = generic_part(p, p);
  EXPECT_LT((v - (2 * g.P_prime.matrix() - identity(2))).norm(), 1e-12);
}

TEST(DavisSymmetry, SixtyDegreesIsBisectorReflection) {
  const GenericPartDecomposition g = generic_part(line(0), line(kPi / 3));
  const ComplexMatrix v = g.embed(davis_symmetry(g));
  const ComplexMatrix reflection = 2 * line(kPi / 6).matrix() - identity(2);
  EXPECT_LT((v - reflection).norm(), 1e-12);
}

TEST(DavisSymmetry, TwoAngleBlocks) {
  const auto [p, q] = two_angle_pair(kPi / 6, kPi / 3);
  const GenericPartDecomposition g = generic_part(p, q);
  const ComplexMatrix v = g.embed(davis_symmetry(g));
  const ComplexMatrix expected =
      block_diag(2 * line(kPi / 12).matrix() - identity(2), 2 * line(kPi / 6).matrix() - identity(2));
  EXPECT_LT((v - expected).norm(), 1e-12);
}

TEST(DavisReconstruction, Residuals) {
  GenericPartDecomposition g = generic_part(line(0), line(kPi / 3));
  DavisResiduals r = davis_reconstruction_check(g, davis_symmetry(g));
  EXPECT_LT(r.p_residual, 1e-12);
  EXPECT_LT(r.q_residual, 1e-12);

  const Projection p = diag_projection({1, 0});
  g = generic_part(p, p);
  r = davis_reconstruction_check(g, davis_symmetry(g));
  EXPECT_LT(r.p_residual, 1e-12);

  Rng rng(14);
  const Projection a = random_projection(10, 5, rng);
  const Projection b = random_projection(10, 5, rng);
  g = generic_part(a, b);
  r = davis_reconstruction_check(g, davis_symmetry(g));
  EXPECT_LT(r.p_residual, 1e-9);
  EXPECT_LT(r.q_residual, 1e-9);
}

TEST(GeodesicExponent, EqualProjections) {
  const Projection p = diag_projection({1, 0, 1});
  const GeodesicData d = geodesic_exponent(generic_part(p, p));
  EXPECT_LT(d.X.norm(), 1e-12);
  EXPECT_NEAR(d.distance, 0.0, 1e-12);
}

TEST(GeodesicExponent, LinesAtAngle) {
  for (double a : {0.1, 0.7, kPi / 3, 1.4}) {
    const GeodesicData d = geodesic_exponent(generic_part(line(0), line(a)));
    EXPECT_NEAR(d.distance, a, 1e-12);
    ASSERT_EQ(d.theta.size(), 1u);
    EXPECT_NEAR(d.theta[0].first, a, 1e-12);
  }
}

TEST(GeodesicExponent, TwoAngles) {
  const auto [p, q] = two_angle_pair(kPi / 6, kPi / 3);
  const GeodesicData d = geodesic_exponent(generic_part(p, q));
  EXPECT_NEAR(d.distance, kPi / 3, 1e-12);
  ASSERT_EQ(d.theta.size(), 2u);
  EXPECT_NEAR(d.theta[0].first, kPi / 6, 1e-12);
  EXPECT_NEAR(d.theta[1].first, kPi / 3, 1e-12);
  for (const auto& c : d.checks) EXPECT_TRUE(c.pass) << c.name;
}

TEST(ExponentDiagonalization, SixtyDegrees) {
  const GenericPartDecomposition g = generic_part(line(0), line(kPi / 3));
  const GeodesicData d = geodesic_exponent(g);
  const auto pairs =
      exponent_diagonalization(g, d, schmidt_decompose(g.P_prime, g.Q_prime));
  ASSERT_EQ(pairs.size(), 2u);
  for (const auto& e : pairs) {
    EXPECT_NEAR(std::abs(e.value), kPi / 3, 1e-12);
    EXPECT_LT((d.X * e.vector - e.value * e.vector).norm(), 1e-12);
  }
}

TEST(ExponentDiagonalization, TwoAngles) {
  const auto [p, q] = two_angle_pair(kPi / 6, kPi / 3);
  const GenericPartDecomposition g = generic_part(p, q);
  const GeodesicData d = geodesic_exponent(g);
  const auto pairs = exponent_diagonalization(g, d, schmidt_decompose(g.P_prime, g.Q_prime));
  ASSERT_EQ(pairs.size(), 4u);
  for (const auto& e : pairs) EXPECT_LT((d.X * e.vector - e.value * e.vector).norm(), 1e-8);
}

TEST(GeodesicPoint, EndpointsAndMidpoint) {
  const GenericPartDecomposition g = generic_part(line(0), line(kPi / 3));
  const GeodesicData d = geodesic_exponent(g);
  EXPECT_LT((geodesic_point(g, d, 0.0).matrix() - g.P_prime.matrix()).norm(), 1e-12);
  EXPECT_LT((geodesic_point(g, d, 1.0).matrix() - g.Q_prime.matrix()).norm(), 1e-12);
  const ComplexMatrix mid = g.embed(geodesic_point(g, d, 0.5).matrix());
  EXPECT_LT((mid - line(kPi / 6).matrix()).norm(), 1e-12);
}

TEST(GeodesicDistance, Cases) {
  const Projection p = diag_projection({1, 0});
  EXPECT_NEAR(geodesic_distance(p, p).distance, 0.0, 1e-12);
  EXPECT_NEAR(geodesic_distance(line(0), line(0.9)).distance, 0.9, 1e-12);

  const DistanceReport r = geodesic_distance(p, diag_projection({0, 1}));
  EXPECT_NEAR(r.distance, kPi / 2, 1e-15);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.plus_part_dim, 1);
  EXPECT_EQ(r.minus_part_dim, 1);
}

TEST(GeodesicDistance, RandomPairsStayInRange) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = uniform_index(2, 16, rng);
    const Index k = uniform_index(1, n - 1, rng);
    const DistanceReport r =
        geodesic_distance(random_projection(n, k, rng), random_projection(n, k, rng));
    EXPECT_GE(r.distance, 0.0);
    EXPECT_LE(r.distance, kPi / 2 + 1e-9);
  }
}
