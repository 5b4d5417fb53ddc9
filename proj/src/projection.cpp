#include "tpl/projection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tpl {

namespace {

// Columns of the eigenvector matrix with eigenvalue above (or below) 1/2.
ComplexMatrix split_frame(const ComplexMatrix& m, bool upper) {
  const Index n = m.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  const HermitianEig e = hermitian_eig(m);
  Index k = 0;
  while (k < n && e.values(k) < 0.5) ++k;
  return upper ? ComplexMatrix(e.vectors.rightCols(n - k)) : ComplexMatrix(e.vectors.leftCols(k));
}

ComplexMatrix range_projector(const SvdResult& d, Index r) {
  return d.U.leftCols(r) * d.U.leftCols(r).adjoint();
}

Index numerical_rank(const RealVector& s, double threshold) {
  Index r = 0;
  while (r < s.size() && s(r) > threshold) ++r;
  return r;
}

}  // namespace

Projection::Projection(const ComplexMatrix& m, const TolerancePolicy& tol) {
  if (m.rows() != m.cols()) {
    throw ValidationError("projection: matrix is not square");
  }
  require_finite(m, "projection");
  const double skew = (m - m.adjoint()).norm();
  if (skew > tol.idempotent_tol) {
    std::ostringstream os;
    os << "projection: ||M - M*||_F = " << skew << " exceeds " << tol.idempotent_tol;
    throw ValidationError(os.str());
  }
  m_ = hermitian_part(m);
  const double defect = (m_ * m_ - m_).norm();
  if (defect > tol.idempotent_tol) {
    std::ostringstream os;
    os << "projection: ||M^2 - M||_F = " << defect << " exceeds " << tol.idempotent_tol;
    throw ValidationError(os.str());
  }
  rank_ = static_cast<Index>(std::llround(m_.trace().real()));
}

Projection Projection::zero(Index n) { return Projection(ComplexMatrix::Zero(n, n), 0); }

Projection Projection::identity(Index n) { return Projection(tpl::identity(n), n); }

ComplexMatrix Projection::range_frame() const { return split_frame(m_, true); }

ComplexMatrix Projection::kernel_frame() const { return split_frame(m_, false); }

Projection Projection::complement() const {
  return Projection(tpl::identity(dim()) - m_, dim() - rank_);
}

Frame::Frame(const ComplexMatrix& m) : m_(m) {
  require_finite(m, "frame");
  if (m.cols() > m.rows()) {
    throw ValidationError("frame: more columns than rows");
  }
  if (m.cols() == 0) return;
  const double gram = (m.adjoint() * m - tpl::identity(m.cols())).cwiseAbs().maxCoeff();
  if (gram > 1e-10) {
    std::ostringstream os;
    os << "frame: columns are not orthonormal (Gram deviation " << gram << ")";
    throw ValidationError(os.str());
  }
}

Projection projection_from_frame(const Frame& f, const TolerancePolicy& tol) {
  const ComplexMatrix& x = f.matrix();
  return Projection(x * x.adjoint(), tol);
}

void require_same_dim(const Projection& p, const Projection& q) {
  if (p.dim() != q.dim()) {
    std::ostringstream os;
    os << "projections act on different spaces (" << p.dim() << " vs " << q.dim() << ")";
    throw ValidationError(os.str());
  }
}

CrimminsResult crimmins_check(const ComplexMatrix& t, const TolerancePolicy& tol) {
  if (t.rows() != t.cols()) throw ValidationError("crimmins_check: matrix is not square");
  require_finite(t, "crimmins_check");
  CrimminsResult out;
  if (t.size() == 0) {
    out.is_product = true;
    return out;
  }
  const double norm_t = op_norm(t);
  out.residual = op_norm(t * t.adjoint() * t - t * t) / std::max(1.0, norm_t * norm_t * norm_t);
  out.is_product = out.residual <= tol.spectral_match;
  return out;
}

ProjectionPair canonical_factorization(const ComplexMatrix& t, const TolerancePolicy& tol) {
  const CrimminsResult c = crimmins_check(t, tol);
  if (!c.is_product) {
    std::ostringstream os;
    os << "canonical_factorization: TT*T != T^2 (residual " << c.residual << ")";
    throw NotAProductError(os.str(), c.residual);
  }
  const Index n = t.rows();
  const SvdResult d = svd(t, true);
  const double sigma_max = d.s.size() ? d.s(0) : 0.0;
  const Index r = numerical_rank(d.s, tol.rank_threshold(n, n, sigma_max));
  ProjectionPair out{Projection(range_projector(d, r), tol),
                     Projection(d.V.leftCols(r) * d.V.leftCols(r).adjoint(), tol)};
  const double residual = op_norm(out.P.matrix() * out.Q.matrix() - t);
  if (residual > tol.spectral_match * std::max(1.0, sigma_max)) {
    throw NumericalFailure("canonical_factorization: ||PQ - T|| = " + std::to_string(residual),
                           residual);
  }
  return out;
}

bool factorization_pair_check(const ComplexMatrix& t, const Frame& s, const Frame& tt,
                              const TolerancePolicy& tol) {
  const CrimminsResult c = crimmins_check(t, tol);
  if (!c.is_product) {
    throw NotAProductError("factorization_pair_check: T is not a product of projections",
                           c.residual);
  }
  const Index n = t.rows();
  if (s.dim() != n || tt.dim() != n) {
    throw ValidationError("factorization_pair_check: frame dimension mismatch");
  }
  const SvdResult d = svd(t, true);
  const double sigma_max = d.s.size() ? d.s(0) : 0.0;
  const Index r = numerical_rank(d.s, tol.rank_threshold(n, n, sigma_max));
  const ComplexMatrix p_range = range_projector(d, r);
  const ComplexMatrix p_coker = d.V.leftCols(r) * d.V.leftCols(r).adjoint();
  const ComplexMatrix ps = s.matrix() * s.matrix().adjoint();
  const ComplexMatrix pt = tt.matrix() * tt.matrix().adjoint();
  const ComplexMatrix one = identity(n);
  const double thr = tol.spectral_match * std::max(1.0, sigma_max);

  const ComplexMatrix extra_s = ps - p_range;
  const ComplexMatrix extra_t = pt - p_coker;
  const double residuals[] = {
      op_norm((one - ps) * p_range),   // R(T) inside S
      op_norm((one - pt) * p_coker),   // N(T)^perp inside T
      op_norm(t * extra_s),            // S - R(T) inside N(T)
      op_norm(p_range * extra_t),      // T - N(T)^perp orthogonal to R(T)
      op_norm(extra_s * extra_t),      // the two extra pieces are orthogonal
  };
  const bool by_inclusion =
      std::all_of(std::begin(residuals), std::end(residuals), [&](double x) { return x <= thr; });

  const double product_residual = op_norm(ps * pt - t);
  const bool by_product = product_residual <= thr;
  if (by_inclusion != by_product) {
    throw NumericalFailure(
        "factorization_pair_check: inclusion test and direct product disagree",
        product_residual);
  }
  return by_product;
}

DixmierDiagnostics dixmier_diagnostics(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol) {
  require_same_dim(p, q);
  DixmierDiagnostics out;
  const Index n = p.dim();
  if (n == 0) return out;
  const ComplexMatrix& pm = p.matrix();
  const ComplexMatrix& qm = q.matrix();
  const ComplexMatrix pc = identity(n) - pm;
  const ComplexMatrix qc = identity(n) - qm;
  out.norm_PQ = op_norm(pm * qm);
  out.norm_PcQc = op_norm(pc * qc);
  const double tau = tol.spectral_match;
  const double worst = std::max(out.norm_PQ, out.norm_PcQc);
  out.diff_invertible = worst < 1.0 - tau;
  out.sum_invertible = out.norm_PcQc < 1.0 - tau;

  out.sigma_min_diff = singular_values(pm - qm)(n - 1);
  out.sigma_min_sum = singular_values(pm + qm)(n - 1);

  // sigma_min(P-Q)^2 = 1 - max(||PQ||, ||P'Q'||)^2 and
  // sigma_min(P+Q) = 1 - ||P'Q'|| (2 when P = Q = 1), with P' = 1 - P.
  const double diff_gap = std::abs(out.sigma_min_diff * out.sigma_min_diff - (1.0 - worst * worst));
  const bool both_identity = p.rank() == n && q.rank() == n;
  const double sum_expected = both_identity ? 2.0 : 1.0 - out.norm_PcQc;
  const double sum_gap = std::abs(out.sigma_min_sum - sum_expected);
  if (diff_gap > tau || sum_gap > tau) {
    std::ostringstream os;
    os << "dixmier_diagnostics: angle criterion and singular values disagree (P-Q gap "
       << diff_gap << ", P+Q gap " << sum_gap << ")";
    throw NumericalFailure(os.str(), std::max(diff_gap, sum_gap));
  }
  return out;
}

}  // namespace tpl
