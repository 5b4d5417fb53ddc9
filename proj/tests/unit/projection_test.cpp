#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tpl/random.hpp"

using namespace tpl;
using namespace tpl::testing;

TEST(Projection, RejectsNonIdempotent) {
  EXPECT_THROW(Projection(real_matrix(2, 2, {1, 1, 0, 0})), ValidationError);
  EXPECT_THROW(Projection(real_matrix(2, 2, {2, 0, 0, 0})), ValidationError);
}

TEST(Projection, RankAndComplement) {
  const Projection p = diag_projection({1, 1, 0});
  EXPECT_EQ(p.rank(), 2);
  EXPECT_EQ(p.complement().rank(), 1);
  EXPECT_EQ(p.range_frame().cols(), 2);
  EXPECT_EQ(p.kernel_frame().cols(), 1);
}

TEST(ProjectionFromFrame, FirstAxis) {
  const Projection p = projection_from_frame(Frame(real_matrix(2, 1, {1, 0})));
  EXPECT_LT((p.matrix() - real_matrix(2, 2, {1, 0, 0, 0})).norm(), 1e-15);
}

TEST(ProjectionFromFrame, TiltedLine) {
  const double a = 0.3;
  const double c = std::cos(a), s = std::sin(a);
  EXPECT_LT((line(a).matrix() - real_matrix(2, 2, {c * c, c * s, c * s, s * s})).norm(), 1e-15);
}

TEST(ProjectionFromFrame, FullIdentity) {
  EXPECT_LT((projection_from_frame(Frame(identity(3))).matrix() - identity(3)).norm(), 1e-15);
}

TEST(ProjectionFromFrame, OwnRangeRoundTrip) {
  Rng rng(9);
  const Projection p = random_projection(8, 3, rng);
  const Projection back = projection_from_frame(Frame(p.range_frame()));
  EXPECT_LT((back.matrix() - p.matrix()).norm(), 1e-10);
}

TEST(Frame, RejectsNonOrthonormal) {
  EXPECT_THROW(Frame(real_matrix(2, 1, {1, 1})), ValidationError);
}

TEST(Crimmins, ProductOfTwoLines) {
  const CrimminsResult r = crimmins_check(real_matrix(2, 2, {0.5, 0.5, 0, 0}));
  EXPECT_TRUE(r.is_product);
  EXPECT_LT(r.residual, 1e-15);
}

TEST(Crimmins, ProjectionIsProduct) {
  Rng rng(2);
  EXPECT_TRUE(crimmins_check(random_projection(6, 2, rng).matrix()).is_product);
}

TEST(Crimmins, NilpotentIsNot) {
  const CrimminsResult r = crimmins_check(real_matrix(2, 2, {0, 1, 0, 0}));
  EXPECT_FALSE(r.is_product);
  EXPECT_GT(r.residual, 0.5);
}

TEST(CanonicalFactorization, Diagonal) {
  const ProjectionPair pq = canonical_factorization(real_matrix(2, 2, {1, 0, 0, 0}));
  EXPECT_LT((pq.P.matrix() - real_matrix(2, 2, {1, 0, 0, 0})).norm(), 1e-12);
  EXPECT_LT((pq.Q.matrix() - real_matrix(2, 2, {1, 0, 0, 0})).norm(), 1e-12);
}

TEST(CanonicalFactorization, TwoLines) {
  const ProjectionPair pq = canonical_factorization(real_matrix(2, 2, {0.5, 0.5, 0, 0}));
  EXPECT_LT((pq.P.matrix() - real_matrix(2, 2, {1, 0, 0, 0})).norm(), 1e-12);
  EXPECT_LT((pq.Q.matrix() - real_matrix(2, 2, {0.5, 0.5, 0.5, 0.5})).norm(), 1e-12);
}

TEST(CanonicalFactorization, Zero) {
  const ProjectionPair pq = canonical_factorization(ComplexMatrix::Zero(3, 3));
  EXPECT_EQ(pq.P.rank(), 0);
  EXPECT_EQ(pq.Q.rank(), 0);
}

TEST(CanonicalFactorization, NonProductThrows) {
  try {
    canonical_factorization(real_matrix(2, 2, {0, 1, 0, 0}));
    FAIL() << "expected NotAProductError";
  } catch (const NotAProductError& e) {
    EXPECT_GT(e.residual(), 0.5);
  }
}

TEST(FactorizationPairCheck, CanonicalAndEnlarged) {
  // T = P_{e1} P_{(e1+e2)/sqrt2} in C^3; e3 lies in R(T)^perp and N(T).
  const ComplexMatrix t = real_matrix(3, 3, {0.5, 0.5, 0, 0, 0, 0, 0, 0, 0});
  const double r = 1 / std::sqrt(2.0);
  const Frame s(real_matrix(3, 1, {1, 0, 0}));
  const Frame tt(real_matrix(3, 1, {r, r, 0}));
  EXPECT_TRUE(factorization_pair_check(t, s, tt));

  const Frame s_big(real_matrix(3, 2, {1, 0, 0, 0, 0, 1}));
  EXPECT_TRUE(factorization_pair_check(t, s_big, tt));

  // e2 is not orthogonal to N(T)^perp, so P_S P_T changes.
  const Frame s_bad(real_matrix(3, 2, {1, 0, 0, 1, 0, 0}));
  EXPECT_FALSE(factorization_pair_check(t, s_bad, tt));
}

TEST(Dixmier, EqualLines) {
  const Projection p = diag_projection({1, 0});
  const DixmierDiagnostics d = dixmier_diagnostics(p, p);
  EXPECT_NEAR(d.norm_PQ, 1.0, 1e-14);
  EXPECT_FALSE(d.diff_invertible);
}

TEST(Dixmier, OrthogonalComplements) {
  const DixmierDiagnostics d = dixmier_diagnostics(diag_projection({1, 0}), diag_projection({0, 1}));
  EXPECT_NEAR(d.norm_PQ, 0.0, 1e-14);
  EXPECT_NEAR(d.norm_PcQc, 0.0, 1e-14);
  EXPECT_TRUE(d.diff_invertible);
  EXPECT_TRUE(d.sum_invertible);
}

TEST(Dixmier, SixtyDegrees) {
  const DixmierDiagnostics d = dixmier_diagnostics(line(0), line(kPi / 3));
  EXPECT_NEAR(d.norm_PQ, 0.5, 1e-14);
  EXPECT_TRUE(d.diff_invertible);
}

TEST(RequireSameDim, Mismatch) {
  EXPECT_THROW(require_same_dim(Projection::zero(2), Projection::zero(3)), ValidationError);
}
