#pragma once

#include <optional>
#include <vector>

#include "tpl/check.hpp"
#include "tpl/spectral_bridge.hpp"

namespace tpl {

/// Splitting of the space into the generic part H' and
/// N(P + Q - 1) = (R(P) and N(Q)) + (N(P) and R(Q)).
struct GenericPartDecomposition {
  Frame generic_frame;
  Frame degenerate_frame;
  Projection P_prime;  // G* P G
  Projection Q_prime;  // G* Q G
  Index plus_part_dim = 0;
  Index minus_part_dim = 0;
  /// max of ||(1 - G G*) P G G*|| and the same for Q.
  double restriction_residual = 0.0;

  Index dim() const { return generic_frame.cols(); }
  /// G M G*, back in the ambient coordinates.
  ComplexMatrix embed(const ComplexMatrix& m) const;
};

GenericPartDecomposition generic_part(const Projection& p, const Projection& q,
                                      const TolerancePolicy& tol = {});

/// Hermitian unitary part of P' + Q' - 1.
ComplexMatrix davis_symmetry(const GenericPartDecomposition& g, const TolerancePolicy& tol = {});

struct DavisResiduals {
  double p_residual = 0.0;  // ||P' - (1 + A' + V(1 - A'^2)^{1/2})/2||
  double q_residual = 0.0;  // ||Q' - (1 - A' + V(1 - A'^2)^{1/2})/2||
};

DavisResiduals davis_reconstruction_check(const GenericPartDecomposition& g,
                                          const ComplexMatrix& v,
                                          const TolerancePolicy& tol = {});

struct GeodesicData {
  ComplexMatrix V;
  ComplexMatrix X;
  double distance = 0.0;
  std::vector<std::pair<double, Index>> theta;  // (angle, multiplicity), angles ascending
  RealVector x_spectrum;                        // eigenvalues of X, nondecreasing
  std::vector<Check> checks;
};

/// X = -i log(V(2P' - 1)). Every invariant of the result is checked; a
/// violated one raises NumericalFailure naming it.
GeodesicData geodesic_exponent(const GenericPartDecomposition& g, const TolerancePolicy& tol = {});

/// eta_n (eigenvalue +theta_n) and zeta_n (-theta_n) of X in H' coordinates.
/// `d` is the Schmidt data of P'Q'.
std::vector<EigenPair> exponent_diagonalization(const GenericPartDecomposition& g,
                                                const GeodesicData& data,
                                                const SchmidtDecomposition& d,
                                                const TolerancePolicy& tol = {});

/// e^{itX} P' e^{-itX}, certified.
Projection geodesic_point(const GenericPartDecomposition& g, const GeodesicData& data, double t,
                          const TolerancePolicy& tol = {});

struct DistanceReport {
  double distance = 0.0;          // pi/2 when a degenerate part exists
  double generic_distance = 0.0;  // ||X|| on H'
  bool degenerate = false;
  Index plus_part_dim = 0;
  Index minus_part_dim = 0;
};

DistanceReport geodesic_distance(const Projection& p, const Projection& q,
                                 const TolerancePolicy& tol = {});

/// Operator norm, short-circuited by the Frobenius norm when that is already
/// below `threshold`.
double residual_norm(const ComplexMatrix& m, double threshold);

}  // namespace tpl
