#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpl/check.hpp"
#include "tpl/grassmann.hpp"

namespace tpl {

/// Everything the library knows about a pair (P, Q), with its cross-checks.
struct TwoProjectionAnalysis {
  Index dim = 0;
  Index rank_P = 0;
  Index rank_Q = 0;

  SchmidtDecomposition schmidt;
  IntersectionDims intersections;
  DifferenceSpectrum difference;
  SumSpectrum sum;
  std::vector<EigenPair> difference_vectors;
  RealVector complement_values;  // Schmidt values of P(1 - Q)
  DixmierDiagnostics dixmier;
  CrimminsResult crimmins;

  Index generic_dim = 0;
  Index plus_part_dim = 0;
  Index minus_part_dim = 0;
  bool geometry_available = false;
  std::string geometry_note;
  std::optional<GeodesicData> geodesic;
  std::vector<EigenPair> exponent_vectors;
  DistanceReport distance;

  std::vector<Check> checks;
};

struct AnalysisOptions {
  /// When set, a failed geodesic certification is recorded in the report
  /// instead of being thrown.
  bool guard_geometry = false;
  /// Skip the per-vector outputs (nu, omega, eta, zeta) for large inputs.
  bool with_vectors = true;
};

TwoProjectionAnalysis analyze_pair(const Projection& p, const Projection& q,
                                   const TolerancePolicy& tol = {},
                                   const AnalysisOptions& options = {});

}  // namespace tpl
