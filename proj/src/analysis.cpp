#include "tpl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tpl {

namespace {

constexpr double kBiorthTol = 1e-10;
constexpr double kDiagTol = 1e-9;
constexpr double kVectorTol = 1e-8;
constexpr double kPenroseTol = 1e-9;
constexpr double kCrimminsTol = 1e-12;
constexpr double kRestrictionTol = 1e-10;

double eigen_residual(const ComplexMatrix& a, const std::vector<EigenPair>& pairs) {
  double worst = 0.0;
  for (const auto& e : pairs) {
    worst = std::max(worst, (a * e.vector - e.value * e.vector).norm());
  }
  return worst;
}

// Penrose residuals of A against T, each scaled by the size of the terms it
// compares so that tiny singular values (huge 1/s) do not dominate.
double scaled_penrose(const ComplexMatrix& t, const ComplexMatrix& a) {
  if (t.size() == 0) return 0.0;
  const double nt = std::max(1.0, op_norm(t));
  const double na = std::max(1.0, op_norm(a));
  const ComplexMatrix ta = t * a;
  const ComplexMatrix at = a * t;
  return std::max({op_norm(ta * t - t) / (nt * nt * na), op_norm(at * a - a) / (na * na * nt),
                   op_norm(ta - ta.adjoint()) / (nt * na), op_norm(at - at.adjoint()) / (nt * na)});
}

}  // namespace

TwoProjectionAnalysis analyze_pair(const Projection& p, const Projection& q,
                                   const TolerancePolicy& tol, const AnalysisOptions& options) {
  require_same_dim(p, q);
  tol.validate();
  const double tau = tol.spectral_match;
  TwoProjectionAnalysis out;
  out.dim = p.dim();
  out.rank_P = p.rank();
  out.rank_Q = q.rank();
  auto& checks = out.checks;

  const ComplexMatrix t = p.matrix() * q.matrix();
  const ComplexMatrix a = p.matrix() - q.matrix();

  out.schmidt = schmidt_decompose(p, q, tol);
  out.intersections = intersection_dims(p, q, out.schmidt);
  const SchmidtDecomposition& d = out.schmidt;
  const ComplexMatrix psi = d.psi_matrix();
  const ComplexMatrix xi = d.xi_matrix();
  const Index k = static_cast<Index>(d.triples.size());

  checks.push_back(make_check("schmidt_reconstruction",
                              out.dim ? op_norm(d.reconstruct() - t) : 0.0, tau));
  {
    ComplexMatrix cross = xi.adjoint() * psi;
    double diag_gap = 0.0;
    for (Index i = 0; i < k; ++i) {
      diag_gap = std::max(diag_gap, std::abs(cross(i, i) - d.triples[i].s));
      cross(i, i) = 0.0;
    }
    checks.push_back(make_check("biorthogonality_offdiagonal",
                                k ? cross.cwiseAbs().maxCoeff() : 0.0, kBiorthTol));
    checks.push_back(make_check("biorthogonality_diagonal", diag_gap, kDiagTol));
  }

  out.difference = difference_spectrum(p, q, tol);
  checks.push_back(make_check("difference_routes_agree", out.difference.route_gap, tau));
  checks.push_back(make_check("difference_pairing", out.difference.pairing_gap, tau));

  out.sum = sum_spectrum(p, q, tol);
  checks.push_back(make_check("sum_routes_agree", out.sum.route_gap, tau));

  const SchmidtDecomposition rebuilt = product_from_difference(p, q, tol);
  checks.push_back(make_check("product_from_difference",
                              padded_value_gap(rebuilt.values(), d.values()), tau));

  {
    std::vector<EigenPair> vectors = difference_eigenvectors(p, q, tol);
    checks.push_back(make_check("difference_eigenvectors", eigen_residual(a, vectors), kVectorTol));
    if (options.with_vectors) out.difference_vectors = std::move(vectors);
  }

  {
    const ComplementTransfer ct = complement_transfer(p, q, tol);
    checks.push_back(make_check("complement_bookkeeping", ct.bookkeeping_gap, tau));
    out.complement_values = ct.p_qc.values();
    std::vector<double> expected(static_cast<std::size_t>(out.intersections.rn), 1.0);
    for (const auto& tr : d.triples) {
      if (!tr.shared) expected.push_back(tr.sine);
    }
    const RealVector ev = Eigen::Map<RealVector>(expected.data(), Index(expected.size()));
    checks.push_back(
        make_check("complement_values", padded_value_gap(out.complement_values, ev), tau));
  }

  out.dixmier = dixmier_diagnostics(p, q, tol);
  out.crimmins = crimmins_check(t, tol);
  checks.push_back(make_check("crimmins_product", out.crimmins.residual, kCrimminsTol));
  checks.push_back(make_check("pseudoinverse_penrose", scaled_penrose(t, schmidt_pseudoinverse(d)),
                              kPenroseTol));

  const GenericPartDecomposition g = generic_part(p, q, tol);
  out.generic_dim = g.dim();
  out.plus_part_dim = g.plus_part_dim;
  out.minus_part_dim = g.minus_part_dim;
  checks.push_back(make_check("generic_part_restriction", g.restriction_residual, kRestrictionTol));
  out.distance.plus_part_dim = g.plus_part_dim;
  out.distance.minus_part_dim = g.minus_part_dim;
  out.distance.degenerate = g.plus_part_dim + g.minus_part_dim > 0;

  // Angles from the Schmidt data, used when the geodesic cannot be certified.
  double max_theta = 0.0;
  for (const auto& tr : d.triples) {
    if (!tr.shared) max_theta = std::max(max_theta, std::atan2(tr.sine, tr.s));
  }

  std::vector<Check> geometry_checks;
  try {
    if (g.dim() > 0) {
      GeodesicData data = geodesic_exponent(g, tol);
      geometry_checks = data.checks;
      const DavisResiduals dr = davis_reconstruction_check(g, data.V, tol);
      geometry_checks.push_back(make_check("davis_reconstruction_P", dr.p_residual, kDiagTol));
      geometry_checks.push_back(make_check("davis_reconstruction_Q", dr.q_residual, kDiagTol));
      const SchmidtDecomposition dg = schmidt_decompose(g.P_prime, g.Q_prime, tol);
      std::vector<EigenPair> eta = exponent_diagonalization(g, data, dg, tol);
      geometry_checks.push_back(
          make_check("exponent_eigenvectors", eigen_residual(data.X, eta), kVectorTol));
      const Projection p0 = geodesic_point(g, data, 0.0, tol);
      const Projection p1 = geodesic_point(g, data, 1.0, tol);
      geometry_checks.push_back(
          make_check("geodesic_start", op_norm(p0.matrix() - g.P_prime.matrix()), kVectorTol));
      geometry_checks.push_back(
          make_check("geodesic_end", op_norm(p1.matrix() - g.Q_prime.matrix()), kVectorTol));
      for (const auto& c : geometry_checks) {
        if (!c.pass) throw NumericalFailure("geometry check " + c.name + " failed", c.residual);
      }
      out.distance.generic_distance = data.distance;
      if (options.with_vectors) out.exponent_vectors = std::move(eta);
      out.geodesic = std::move(data);
    }
    out.geometry_available = true;
  } catch (const NumericalFailure& e) {
    if (!options.guard_geometry) throw;
    out.geometry_available = false;
    out.geometry_note = e.what();
    out.geodesic.reset();
    geometry_checks.clear();
    out.distance.generic_distance = max_theta;
  }
  checks.insert(checks.end(), geometry_checks.begin(), geometry_checks.end());
  out.distance.distance =
      out.distance.degenerate ? std::numbers::pi / 2 : out.distance.generic_distance;
  return out;
}

}  // namespace tpl
