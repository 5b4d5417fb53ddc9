#pragma once

#include <vector>

#include "tpl/projection.hpp"

namespace tpl {

/// One term s * psi xi* of T = PQ, with psi in R(P), xi in R(Q) and
/// <xi, psi> = s. psi = s xi + sine zeta with zeta a unit vector in N(Q);
/// sine is sqrt(1 - s^2) computed without cancellation.
struct SchmidtTriple {
  double s = 0.0;
  double sine = 0.0;
  bool shared = false;  // psi = xi spans part of R(P) and R(Q)
  ComplexVector psi;
  ComplexVector xi;
  ComplexVector zeta;   // zero when shared or unknown
};

struct SchmidtDecomposition {
  Index dim = 0;
  std::vector<SchmidtTriple> triples;  // s nonincreasing
  Index dim_ones = 0;

  RealVector values() const;
  ComplexMatrix psi_matrix() const;
  ComplexMatrix xi_matrix() const;
  /// Sum of s_n psi_n xi_n*.
  ComplexMatrix reconstruct() const;
};

/// Principal vectors of the pair (R(P), R(Q)). basis_S = F_P Y and
/// basis_T = F_Q Z with F_P* F_Q Y = Z diag(cosines) on the leading columns.
/// Large angles come from the SVD of F_P* F_Q, small ones from the SVD of
/// F_N* F_P with F_N a frame of N(Q), so tiny sines keep full accuracy.
struct PrincipalVectors {
  ComplexMatrix basis_S;       // n x rank(P)
  ComplexMatrix basis_T;       // n x rank(Q)
  RealVector cosines;          // min(rank P, rank Q) entries, nonincreasing
  RealVector sines;            // ||(1 - Q) basis_S.col(k)||, same length
  ComplexMatrix sine_vectors;  // unit (1 - Q) basis_S.col(k), n x min(rank P, rank Q)
  Index kept = 0;              // cosines above the rank threshold
};

PrincipalVectors principal_vectors(const Projection& p, const Projection& q,
                                   const TolerancePolicy& tol = {});

SchmidtDecomposition schmidt_decompose(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol = {});

/// Schmidt data of an arbitrary matrix from its thin SVD (no projection
/// structure assumed; sine is sqrt(1 - s^2) and zeta stays empty).
SchmidtDecomposition schmidt_from_svd(const ComplexMatrix& t, const TolerancePolicy& tol = {});

struct IntersectionDims {
  Index rr = 0;  // R(P) and R(Q)
  Index nn = 0;  // N(P) and N(Q)
  Index rn = 0;  // R(P) and N(Q)
  Index nr = 0;  // N(P) and R(Q)

  bool operator==(const IntersectionDims&) const = default;
};

IntersectionDims intersection_dims(const Projection& p, const Projection& q,
                                   const SchmidtDecomposition& d);

/// The same four dimensions computed from kernels of stacked complements,
/// e.g. R(P) and N(Q) is the kernel of [1 - P; Q].
IntersectionDims intersection_dims_direct(const Projection& p, const Projection& q,
                                          const TolerancePolicy& tol = {});

struct BiorthogonalBases {
  Frame basis_S;
  Frame basis_T;
};

BiorthogonalBases biorthogonal_bases(const Projection& p, const Projection& q,
                                     const TolerancePolicy& tol = {});

/// True iff every off-diagonal entry of X*Y has modulus at most 1e-10.
bool isometry_diagonality_check(const Frame& x, const Frame& y);

struct DifferenceSpectrum {
  Index plus_one_mult = 0;
  Index minus_one_mult = 0;
  Index zero_mult = 0;
  std::vector<std::pair<double, Index>> paired;  // (lambda in (0,1), multiplicity)

  RealVector direct;     // eigenvalues of P - Q, nondecreasing
  RealVector predicted;  // from the Schmidt data, nondecreasing
  double route_gap = 0.0;
  double pairing_gap = 0.0;
};

/// Eigenvalues of A = P - Q computed directly and predicted from the Schmidt
/// values of PQ. Throws NumericalFailure when the two disagree.
DifferenceSpectrum difference_spectrum(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol = {});

struct EigenPair {
  double value = 0.0;
  ComplexVector vector;
};

/// nu_k (eigenvalue +lambda_k) and omega_k (eigenvalue -lambda_k) built from
/// the Schmidt vectors; triples with s = 1 are skipped.
std::vector<EigenPair> difference_eigenvectors(const Projection& p, const Projection& q,
                                               const TolerancePolicy& tol = {});

/// Schmidt data of PQ rebuilt from the eigendecomposition of P - Q. Throws
/// NumericalFailure when the values differ from schmidt_decompose.
SchmidtDecomposition product_from_difference(const Projection& p, const Projection& q,
                                             const TolerancePolicy& tol = {});

struct SumSpectrum {
  RealVector direct;
  RealVector predicted;
  double route_gap = 0.0;
};

/// Eigenvalues of P + Q, cross-checked against 1 +- s_n plus the fixed part.
SumSpectrum sum_spectrum(const Projection& p, const Projection& q,
                         const TolerancePolicy& tol = {});

struct ComplementTransfer {
  SchmidtDecomposition pq;
  SchmidtDecomposition p_qc;
  SchmidtDecomposition pc_q;
  SchmidtDecomposition pc_qc;
  /// Multiset gap between eig(1 - PQP) and {1 on N(P)} + {1 - s_n^2} + {1 on R(P) and N(Q)}.
  double bookkeeping_gap = 0.0;
};

ComplementTransfer complement_transfer(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol = {});

/// Sum of (1/s_n) xi_n psi_n*.
ComplexMatrix schmidt_pseudoinverse(const SchmidtDecomposition& d);

/// Largest elementwise gap between two nonincreasing value lists, the shorter
/// one padded with zeros.
double padded_value_gap(const RealVector& a, const RealVector& b);

}  // namespace tpl
