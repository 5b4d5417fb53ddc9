#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tpl/constructions.hpp"
#include "tpl/random.hpp"

using namespace tpl;
using namespace tpl::testing;

TEST(AssembleIdempotent, Cases) {
  EXPECT_LT((assemble_idempotent(ComplexMatrix::Zero(2, 1)) - diag_projection({1, 1, 0}).matrix()).norm(),
            1e-15);
  EXPECT_LT((assemble_idempotent(real_matrix(1, 1, {1})) - real_matrix(2, 2, {1, 1, 0, 0})).norm(), 1e-15);
  const ComplexMatrix e = assemble_idempotent(real_matrix(1, 1, {2}));
  EXPECT_LT((e * e - e).norm(), 1e-15);
}

TEST(IdempotentProjections, ZeroBlock) {
  const IdempotentProjections ip = idempotent_projections(ComplexMatrix::Zero(2, 2));
  EXPECT_LT((ip.P_null.matrix() - diag_projection({0, 0, 1, 1}).matrix()).norm(), 1e-12);
}

TEST(IdempotentProjections, UnitBlock) {
  const IdempotentProjections ip = idempotent_projections(real_matrix(1, 1, {1}));
  EXPECT_LT((ip.P_null.matrix() - real_matrix(2, 2, {0.5, -0.5, -0.5, 0.5})).norm(), 1e-12);
  const ComplexMatrix t = ip.P_range.matrix() * ip.P_null.matrix();
  EXPECT_LT((t * t.adjoint() - real_matrix(2, 2, {0.5, 0, 0, 0})).norm(), 1e-12);
}

TEST(IdempotentProjections, RoutesAgreeOnRandomBlocks) {
  Rng rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    const Index l = uniform_index(1, 8, rng), s = uniform_index(1, 8, rng);
    EXPECT_LT(idempotent_projections(random_gaussian(l, s, rng)).route_gap, 1e-9);
  }
}

TEST(MoorePenrose, ZeroBlockIsItself) {
  const ComplexMatrix b = ComplexMatrix::Zero(1, 2);
  EXPECT_LT((moore_penrose_idempotent(b) - assemble_idempotent(b)).norm(), 1e-12);
}

TEST(MoorePenrose, UnitBlock) {
  const ComplexMatrix b = real_matrix(1, 1, {1});
  const ComplexMatrix a = moore_penrose_idempotent(b);
  EXPECT_LT((a - real_matrix(2, 2, {0.5, 0, 0.5, 0})).norm(), 1e-12);
  const ComplexMatrix e = assemble_idempotent(b);
  EXPECT_LT((e * a * e - e).norm(), 1e-12);
}

TEST(MoorePenrose, RandomAgainstSvd) {
  Rng rng(12);
  const ComplexMatrix b = random_gaussian(3, 2, rng);
  const ComplexMatrix e = assemble_idempotent(b);
  const ComplexMatrix a = moore_penrose_idempotent(b);
  EXPECT_LT(penrose_residuals(e, a).max(), 1e-10);
  const SvdResult d = svd(e);
  ComplexMatrix oracle = ComplexMatrix::Zero(e.cols(), e.rows());
  for (Index k = 0; k < d.s.size(); ++k) {
    if (d.s(k) > 1e-12 * d.s(0)) oracle += d.V.col(k) * d.U.col(k).adjoint() / d.s(k);
  }
  EXPECT_LT(op_norm(a - oracle), 1e-10);
}

TEST(SevenEquivalences, ZeroBlock) {
  const SevenEquivalencesReport r = seven_equivalences_report(ComplexMatrix::Zero(2, 2));
  EXPECT_EQ(r.values_B.size(), 0);
  EXPECT_EQ(r.values_PN_PR.size(), 0);
  for (const auto& c : r.certificates) EXPECT_TRUE(c.pass) << c.name;
}

TEST(SevenEquivalences, UnitBlock) {
  const SevenEquivalencesReport r = seven_equivalences_report(real_matrix(1, 1, {1}));
  ASSERT_EQ(r.values_PN_PR.size(), 1);
  EXPECT_NEAR(r.values_PN_PR(0), std::sqrt(0.5), 1e-12);
}

TEST(SevenEquivalences, RandomSquare) {
  Rng rng(44);
  const SevenEquivalencesReport r = seven_equivalences_report(random_gaussian(4, 4, rng));
  ASSERT_FALSE(r.certificates.empty());
  for (const auto& c : r.certificates) EXPECT_TRUE(c.pass) << c.name << " " << c.residual;
}

TEST(IdempotentDistance, ScalarTwo) {
  const IdempotentDistance d = idempotent_geodesic_distance(real_matrix(1, 1, {2}));
  EXPECT_NEAR(d.distance, 0.46364760900080611, 1e-12);
  EXPECT_NEAR(d.geometric, d.closed_form, 1e-10);
  EXPECT_FALSE(d.degenerate);
}

TEST(IdempotentDistance, Identity) {
  EXPECT_NEAR(idempotent_geodesic_distance(identity(3)).distance, kPi / 4, 1e-10);
}

TEST(IdempotentDistance, TinyBlockIsDegenerate) {
  const IdempotentDistance d = idempotent_geodesic_distance(real_matrix(1, 1, {1e-14}));
  EXPECT_TRUE(d.degenerate);
  EXPECT_NEAR(d.distance, kPi / 2, 1e-15);
}

TEST(IdempotentDistance, RectangularRejected) {
  EXPECT_THROW(idempotent_geodesic_distance(ComplexMatrix::Zero(1, 2)), ValidationError);
}

TEST(Halmos, ScalarHalf) {
  const HalmosDilation h = halmos_dilate(real_matrix(1, 1, {0.5}));
  const double r = std::sqrt(0.75);
  EXPECT_LT((h.U - real_matrix(2, 2, {0.5, r, r, -0.5})).norm(), 1e-14);
  EXPECT_LT(h.unitarity_residual, 1e-14);
  EXPECT_LT(h.corner_residual, 1e-14);
}

TEST(Halmos, IdentityAndZero) {
  HalmosDilation h = halmos_dilate(identity(2));
  EXPECT_LT((h.U - diag_projection({1, 1, 0, 0}).matrix() * 2 + identity(4)).norm(), 1e-12);
  EXPECT_LT((h.Q_dil.matrix() - h.P_dil.matrix()).norm(), 1e-12);

  h = halmos_dilate(ComplexMatrix::Zero(2, 2));
  EXPECT_LT((h.U.topRightCorner(2, 2) - identity(2)).norm(), 1e-12);
  EXPECT_LT((h.U.bottomLeftCorner(2, 2) - identity(2)).norm(), 1e-12);
}

TEST(Halmos, RejectsExpansive) {
  EXPECT_THROW(halmos_dilate(real_matrix(1, 1, {1.5})), ValidationError);
  EXPECT_THROW(halmos_dilate(ComplexMatrix::Zero(1, 2)), ValidationError);
}

TEST(DilationIntersections, Cases) {
  DilationIntersections d = dilation_intersections(halmos_dilate(real_matrix(1, 1, {0.5})));
  EXPECT_EQ(d.direct, IntersectionDims{});

  // Gamma = 1 gives Q_dil = P_dil = diag(1, 0), so both ranges and both kernels coincide.
  d = dilation_intersections(halmos_dilate(identity(3)));
  EXPECT_EQ(d.direct, (IntersectionDims{3, 3, 0, 0}));
  EXPECT_EQ(d.direct, d.from_gamma);

  Rng rng(8);
  d = dilation_intersections(halmos_dilate(random_frame(4, 4, rng)));
  EXPECT_EQ(d.direct, (IntersectionDims{4, 4, 0, 0}));

  d = dilation_intersections(halmos_dilate(real_matrix(3, 3, {1, 0, 0, 0, 0.5, 0, 0, 0, 0})));
  EXPECT_EQ(d.direct, (IntersectionDims{1, 1, 1, 1}));
  EXPECT_EQ(d.direct, d.from_gamma);
}

TEST(DilationGeometry, Cases) {
  DilationGeometry g = dilation_geometry(halmos_dilate(real_matrix(1, 1, {0.5})));
  EXPECT_NEAR(g.distance.distance, kPi / 3, 1e-10);

  const double c = std::cos(0.4), s = std::sin(0.4);
  g = dilation_geometry(halmos_dilate(real_matrix(2, 2, {c, -s, s, c})));
  EXPECT_NEAR(g.distance.distance, 0.0, 1e-10);

  g = dilation_geometry(halmos_dilate(real_matrix(2, 2, {0.9, 0, 0, 0.3})));
  EXPECT_NEAR(g.distance.distance, std::acos(0.3), 1e-10);
  RealVector expected(4);
  expected << -std::acos(0.3), -std::acos(0.9), std::acos(0.9), std::acos(0.3);
  EXPECT_LT(multiset_distance(g.x_spectrum, expected), 1e-8);
  for (const auto& ch : g.checks) EXPECT_TRUE(ch.pass) << ch.name;
}
