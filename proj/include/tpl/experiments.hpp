#pragma once

#include <string>
#include <vector>

#include "tpl/analysis.hpp"

namespace tpl {

/// Time support I and frequency support J on the n-point cyclic grid.
struct ConcentrationSpec {
  Index n = 0;
  std::vector<Index> I;
  std::vector<Index> J;

  void validate() const;
};

/// Half-open range lo:hi as an index list.
std::vector<Index> index_range(Index lo, Index hi);

/// P_I = diag(chi_I) and Q_J = F* diag(chi_J) F with the unitary DFT F.
ProjectionPair concentration_projections(const ConcentrationSpec& spec,
                                         const TolerancePolicy& tol = {});

struct ConcentrationReport {
  TwoProjectionAnalysis analysis;
  double trace = 0.0;           // trace(P_I Q_J P_I)
  double expected_trace = 0.0;  // |I| |J| / n
  double sum_s_squared = 0.0;   // Hilbert-Schmidt norm squared of P_I Q_J
  double spectrum_symmetry = 0.0;
  std::vector<Check> checks;
};

ConcentrationReport concentration_analysis(const ConcentrationSpec& spec,
                                           const TolerancePolicy& tol = {});

struct ProlateReport {
  RealVector values;  // s_n^2, nonincreasing
  RealVector gaps;    // values(i) - values(i + 1)
  Index transition_count = 0;  // values in [0.1, 0.9]
  Index top_count = 0;         // ceil(2 |I| |J| / n), capped at |I|
  double min_top_gap = 0.0;
  bool simple = false;         // every gap among the top values above 1e-9
};

/// Eigenvalue profile of P_I Q_J P_I for contiguous I and J.
ProlateReport prolate_clustering_report(const ConcentrationSpec& spec,
                                        const TolerancePolicy& tol = {});

/// Unimodular symbols sampled at t_k = 2 pi k / n, n a power of two.
struct SymbolSpec {
  Index n = 0;
  ComplexVector phi;
  ComplexVector psi;

  void validate() const;
};

/// Samples of a named symbol: "one", "char:K" (e^{iKt}), "smooth:A"
/// (exp(iA cos t)) and "jump:J" (e^{iat} on [0, 2pi) with |e^{2 pi i a} - 1| = J).
ComplexVector symbol_samples(const std::string& name, Index n);

struct HankelReport {
  Index section = 0;
  RealVector section_values;  // singular values of the m x m section of H(conj(phi) psi)
  bool model_available = false;
  RealVector model_values;    // Schmidt values of PQ in the cyclic 2m model
  double model_gap = 0.0;     // sup distance between the two lists (reported only)
  double value_at_half = 0.0; // section_values(m / 2)
};

HankelReport hankel_product_analysis(const SymbolSpec& spec, Index m,
                                     const TolerancePolicy& tol = {});

struct SincExperimentSpec {
  std::vector<int> n_list;
  double length = 200.0;
  double step = 0.05;

  void validate() const;
};

struct SincCell {
  int n = 0;
  double ratio = 0.0;          // ||K e_n - e_n|| / ||e_n||
  double bound = 0.0;          // ((4/pi) arctan(1/n))^{1/2}
  bool within_bound = false;   // ratio <= bound + 0.05
  Complex lambda_quadrature;   // integral of sinc(u) e_n(u) over [0, L]
  Complex lambda_closed_form;  // (pi/2 - arctan(1/n)) + (i/4) ln(1 + 4n^2)
  Complex lambda_laplace;      // arctan(2n)/2 + (i/4) ln(1 + 4n^2)
  double closed_form_gap = 0.0;
  double laplace_gap = 0.0;
  double refined_bound = 0.0;  // (1 - (2/pi) Re lambda_laplace)^{1/2}
};

struct SincReport {
  std::vector<SincCell> cells;
  bool monotone = false;
  std::vector<Check> checks;
};

SincReport sinc_ratio_experiment(const SincExperimentSpec& spec);

}  // namespace tpl
