#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "tpl/errors.hpp"

namespace tpl {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerances shared by every module. All values are dimensionless.
struct TolerancePolicy {
  /// Per-dimension relative rank cutoff; the effective threshold is
  /// rank_rel * max(rows, cols) * scale.
  double rank_rel = 1e-12;
  double spectral_match = 1e-8;
  double idempotent_tol = 1e-10;
  double unit_circle_tol = 1e-10;

  /// Throws ValidationError unless every field lies in (0, 1e-2).
  void validate() const;

  double rank_threshold(Index rows, Index cols, double scale) const;
};

struct SvdResult {
  ComplexMatrix U;
  RealVector s;  // nonincreasing
  ComplexMatrix V;
};

struct HermitianEig {
  RealVector values;  // nondecreasing
  ComplexMatrix vectors;
};

/// Promotes a real matrix to complex.
ComplexMatrix to_complex(const Eigen::MatrixXd& m);

/// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix hermitian_part(const ComplexMatrix& m);
ComplexMatrix identity(Index n);

/// Operator (spectral) norm, i.e. the largest singular value.
double op_norm(const ComplexMatrix& m);

/// Thin SVD by default; `full` returns square U and V.
SvdResult svd(const ComplexMatrix& m, bool full = false);
RealVector singular_values(const ComplexMatrix& m);

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized
/// after the Hermitian check.
HermitianEig hermitian_eig(const ComplexMatrix& m, const TolerancePolicy& tol = {});

/// f(M) for Hermitian M through its eigendecomposition.
ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f,
                                 const TolerancePolicy& tol = {});

/// Square root of a positive semidefinite matrix; eigenvalues in [-tol, 0)
/// are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, const TolerancePolicy& tol = {});

/// exp(i t X) for Hermitian X.
ComplexMatrix expi_hermitian(const ComplexMatrix& x, double t = 1.0,
                             const TolerancePolicy& tol = {});

/// Unitary factor V = M (M*M)^{-1/2} of a square matrix with trivial kernel.
ComplexMatrix polar_unitary_part(const ComplexMatrix& m, const TolerancePolicy& tol = {});

/// Hermitian X with exp(iX) = U and spectrum in (-pi, pi).
ComplexMatrix principal_log_unitary(const ComplexMatrix& u, const TolerancePolicy& tol = {});

/// Orthonormal basis of the numerical kernel of M (possibly zero columns).
/// The rank cutoff is relative to max(sigma_max, scale_floor); pass 1 for
/// matrices built from projections, where pure rounding noise must not count.
ComplexMatrix orthonormal_nullspace(const ComplexMatrix& m, const TolerancePolicy& tol = {},
                                    double scale_floor = 0.0);

/// Orthonormal basis of the orthogonal complement of span(frame).
ComplexMatrix orthogonal_complement(const ComplexMatrix& frame, Index ambient);

struct Cluster {
  double center = 0.0;
  Index multiplicity = 0;
  Index first = 0;  // position of the first member in the sorted input
};

/// Groups a nondecreasing sequence into runs whose consecutive members are
/// closer than `gap`.
std::vector<Cluster> cluster_sorted(const RealVector& sorted, double gap);

/// Largest elementwise deviation between two multisets after sorting. The
/// result is +inf when the sizes differ.
double multiset_distance(RealVector a, RealVector b);

}  // namespace tpl
