#pragma once

#include "tpl/numerics.hpp"

namespace tpl {

/// Hermitian idempotent, certified at construction.
class Projection {
 public:
  /// Symmetrizes M and checks ||M - M*||_F and ||M^2 - M||_F against
  /// tol.idempotent_tol. Throws ValidationError otherwise.
  explicit Projection(const ComplexMatrix& m, const TolerancePolicy& tol = {});

  static Projection zero(Index n);
  static Projection identity(Index n);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  Index rank() const { return rank_; }

  /// Orthonormal bases of R(P) and N(P), taken from an eigendecomposition.
  ComplexMatrix range_frame() const;
  ComplexMatrix kernel_frame() const;

  /// 1 - P.
  Projection complement() const;

 private:
  Projection(ComplexMatrix m, Index rank) : m_(std::move(m)), rank_(rank) {}

  ComplexMatrix m_;
  Index rank_ = 0;
};

/// n x k matrix with orthonormal columns.
class Frame {
 public:
  explicit Frame(const ComplexMatrix& m);
  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }

 private:
  ComplexMatrix m_;
};

Projection projection_from_frame(const Frame& f, const TolerancePolicy& tol = {});

struct CrimminsResult {
  bool is_product = false;
  double residual = 0.0;
};

/// T is a product of two orthogonal projections iff TT*T = T^2.
CrimminsResult crimmins_check(const ComplexMatrix& t, const TolerancePolicy& tol = {});

struct ProjectionPair {
  Projection P;
  Projection Q;
};

/// T = P_{R(T)} P_{N(T)^perp}. Throws NotAProductError when the Crimmins test fails.
ProjectionPair canonical_factorization(const ComplexMatrix& t, const TolerancePolicy& tol = {});

/// Whether P_S P_T = T, decided through the inclusions R(T) in S,
/// N(T)^perp in T, and (S - R(T)) + (T - N(T)^perp) inside R(T)^perp and N(T)
/// with the two pieces orthogonal. The product is also formed directly and a
/// disagreement between the two answers raises NumericalFailure.
bool factorization_pair_check(const ComplexMatrix& t, const Frame& s, const Frame& tt,
                              const TolerancePolicy& tol = {});

struct DixmierDiagnostics {
  double norm_PQ = 0.0;
  double norm_PcQc = 0.0;
  bool diff_invertible = false;
  bool sum_invertible = false;
  double sigma_min_diff = 0.0;
  double sigma_min_sum = 0.0;
};

/// Cosines of the two Dixmier angles and the invertibility of P - Q and P + Q.
/// Cross-checked against the smallest singular values of P - Q and P + Q.
DixmierDiagnostics dixmier_diagnostics(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol = {});

void require_same_dim(const Projection& p, const Projection& q);

}  // namespace tpl
