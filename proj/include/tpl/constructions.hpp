#pragma once

#include <vector>

#include "tpl/check.hpp"
#include "tpl/grassmann.hpp"

namespace tpl {

/// E = [[1_L, B], [0, 0_S]] with B of size L x S.
ComplexMatrix assemble_idempotent(const ComplexMatrix& b);

struct IdempotentProjections {
  Projection P_range;
  Projection P_null;
  double route_gap = 0.0;  // resolvent formula against the explicit block matrix
};

/// P_{R(E)} and P_{N(E)} = (1 - E)(1 - E - E*)^{-1}, the latter cross-checked
/// against the block formula in B.
IdempotentProjections idempotent_projections(const ComplexMatrix& b,
                                             const TolerancePolicy& tol = {});

/// E^dagger = P_{N(E)^perp} P_{R(E)}.
ComplexMatrix moore_penrose_idempotent(const ComplexMatrix& b, const TolerancePolicy& tol = {});

struct PenroseResiduals {
  double eae = 0.0;        // ||E A E - E||
  double aea = 0.0;        // ||A E A - A||
  double ea_hermitian = 0.0;
  double ae_hermitian = 0.0;

  double max() const;
};

PenroseResiduals penrose_residuals(const ComplexMatrix& e, const ComplexMatrix& a);

struct SevenEquivalencesReport {
  RealVector values_E;
  RealVector values_B;
  RealVector values_PNperp_PR;
  RealVector values_PN_PR;
  std::vector<Check> certificates;
};

SevenEquivalencesReport seven_equivalences_report(const ComplexMatrix& b,
                                                  const TolerancePolicy& tol = {});

struct IdempotentDistance {
  double distance = 0.0;     // pi/2 on the degenerate branch
  double closed_form = 0.0;  // arctan(1 / sigma_min(B))
  double geometric = 0.0;    // from the geodesic exponent
  bool degenerate = false;
  double sigma_min = 0.0;
  std::vector<Check> checks;
};

/// d(P_{R(E)}, P_{N(E)}) = arctan(||B^{-1}||) for square B. Throws
/// NumericalFailure when the closed form and the geodesic disagree.
IdempotentDistance idempotent_geodesic_distance(const ComplexMatrix& b,
                                                const TolerancePolicy& tol = {});

struct HalmosDilation {
  ComplexMatrix Gamma;
  ComplexMatrix U;
  Projection P_dil;
  Projection Q_dil;
  double unitarity_residual = 0.0;
  double corner_residual = 0.0;  // ||U Q P - diag(Gamma, 0)||
};

/// U = [[G, (1 - GG*)^{1/2}], [(1 - G*G)^{1/2}, -G*]], P = diag(1, 0), Q = U* P U.
HalmosDilation halmos_dilate(const ComplexMatrix& gamma, const TolerancePolicy& tol = {});

struct DilationIntersections {
  IntersectionDims direct;
  IntersectionDims from_gamma;
};

/// Throws NumericalFailure if the two ways of counting disagree.
DilationIntersections dilation_intersections(const HalmosDilation& h,
                                             const TolerancePolicy& tol = {});

struct DilationGeometry {
  DistanceReport distance;
  bool invertible = false;
  double sigma_min = 0.0;
  RealVector x_spectrum;
  RealVector predicted_spectrum;
  std::vector<Check> checks;
};

DilationGeometry dilation_geometry(const HalmosDilation& h, const TolerancePolicy& tol = {});

}  // namespace tpl
