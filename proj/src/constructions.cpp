#include "tpl/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>

namespace tpl {

namespace {

constexpr double kPenroseTol = 1e-9;
constexpr double kDistanceTol = 1e-8;

double vector_gap(const RealVector& a, const RealVector& b) { return padded_value_gap(a, b); }

// Square root of 1 - G*G (or 1 - GG*) for a contraction. Eigenvalues up to
// twice the unit-circle tolerance are treated as zero so that singular values
// of G equal to 1 in exact arithmetic give exactly zero blocks.
ComplexMatrix defect_root(const ComplexMatrix& m, const TolerancePolicy& tol) {
  const double floor = 2.0 * tol.unit_circle_tol;
  return hermitian_function(
      m, [&](double x) { return x <= floor ? 0.0 : std::sqrt(x); }, tol);
}

double halmos_angle(double sigma, const TolerancePolicy& tol) {
  const double c = std::min(sigma, 1.0);
  if ((1.0 - c) * (1.0 + c) <= 2.0 * tol.unit_circle_tol) return 0.0;
  return std::acos(c);
}

}  // namespace

ComplexMatrix assemble_idempotent(const ComplexMatrix& b) {
  require_finite(b, "assemble_idempotent");
  const Index l = b.rows();
  const Index s = b.cols();
  ComplexMatrix e = ComplexMatrix::Zero(l + s, l + s);
  e.topLeftCorner(l, l).setIdentity();
  e.topRightCorner(l, s) = b;
  const double nb = op_norm(b);
  const double defect = op_norm(e * e - e);
  if (defect > 1e-12 * (1.0 + nb) * (1.0 + nb)) {
    throw NumericalFailure("assemble_idempotent: E^2 != E", defect);
  }
  return e;
}

IdempotentProjections idempotent_projections(const ComplexMatrix& b, const TolerancePolicy& tol) {
  const ComplexMatrix e = assemble_idempotent(b);
  const Index l = b.rows();
  const Index s = b.cols();
  const Index n = l + s;
  const ComplexMatrix one = identity(n);

  ComplexMatrix range = ComplexMatrix::Zero(n, n);
  range.topLeftCorner(l, l).setIdentity();

  // (1 - E - E*) is Hermitian and invertible for any idempotent E.
  const HermitianEig me = hermitian_eig(one - e - e.adjoint(), tol);
  const RealVector mags = me.values.cwiseAbs();
  const double mu_min = mags.size() ? mags.minCoeff() : 1.0;
  const double mu_max = mags.size() ? mags.maxCoeff() : 1.0;
  if (mu_min <= tol.rank_threshold(n, n, mu_max)) {
    throw NumericalFailure("idempotent_projections: 1 - E - E* is numerically singular", mu_min);
  }
  const ComplexMatrix inv =
      me.vectors * me.values.cwiseInverse().cast<Complex>().asDiagonal() * me.vectors.adjoint();
  const ComplexMatrix resolvent = (one - e) * inv;

  // Explicit block form of the projection onto N(E) = {(-Bx, x)}.
  const ComplexMatrix bbs = b * b.adjoint();
  const ComplexMatrix bsb = b.adjoint() * b;
  const Eigen::LLT<ComplexMatrix> left(identity(l) + bbs);
  const Eigen::LLT<ComplexMatrix> right(identity(s) + bsb);
  ComplexMatrix block(n, n);
  // X (1 + Y)^{-1} = ((1 + Y)^{-1} X*)* for Hermitian Y.
  block.topLeftCorner(l, l) = left.solve(bbs.adjoint()).adjoint();
  block.topRightCorner(l, s) = -right.solve(b.adjoint()).adjoint();
  block.bottomLeftCorner(s, l) = -left.solve(b).adjoint();
  block.bottomRightCorner(s, s) = right.solve(identity(s));

  const double gap = n ? op_norm(resolvent - block) : 0.0;
  if (gap > kPenroseTol) {
    throw NumericalFailure("idempotent_projections: resolvent and block formulas disagree", gap);
  }
  return {Projection(range, tol), Projection(hermitian_part(resolvent), tol), gap};
}

ComplexMatrix moore_penrose_idempotent(const ComplexMatrix& b, const TolerancePolicy& tol) {
  const IdempotentProjections ip = idempotent_projections(b, tol);
  const Index n = ip.P_range.dim();
  return (identity(n) - ip.P_null.matrix()) * ip.P_range.matrix();
}

double PenroseResiduals::max() const { return std::max({eae, aea, ea_hermitian, ae_hermitian}); }

PenroseResiduals penrose_residuals(const ComplexMatrix& e, const ComplexMatrix& a) {
  PenroseResiduals r;
  if (e.size() == 0) return r;
  const ComplexMatrix ea = e * a;
  const ComplexMatrix ae = a * e;
  r.eae = op_norm(ea * e - e);
  r.aea = op_norm(ae * a - a);
  r.ea_hermitian = op_norm(ea - ea.adjoint());
  r.ae_hermitian = op_norm(ae - ae.adjoint());
  return r;
}

SevenEquivalencesReport seven_equivalences_report(const ComplexMatrix& b,
                                                  const TolerancePolicy& tol) {
  const ComplexMatrix e = assemble_idempotent(b);
  const IdempotentProjections ip = idempotent_projections(b, tol);
  const Projection& pr = ip.P_range;
  const Projection& pn = ip.P_null;
  const Projection pn_perp = pn.complement();
  SevenEquivalencesReport out;
  auto& certs = out.certificates;
  auto scaled = [](const ComplexMatrix& m) { return std::max(1.0, op_norm(m)); };

  const SchmidtDecomposition de = schmidt_from_svd(e, tol);
  out.values_E = de.values();
  certs.push_back(make_check("schmidt_E", op_norm(de.reconstruct() - e) / scaled(e), kPenroseTol));

  const SchmidtDecomposition db = schmidt_from_svd(b, tol);
  out.values_B = db.values();
  const double b_res = b.size() == 0       ? 0.0
                      : db.triples.empty() ? op_norm(b)
                                           : op_norm(db.reconstruct() - b) / scaled(b);
  certs.push_back(make_check("schmidt_B", b_res, kPenroseTol));

  const SchmidtDecomposition d1 = schmidt_decompose(pn_perp, pr, tol);
  out.values_PNperp_PR = d1.values();
  certs.push_back(make_check("schmidt_PNperp_PR",
                             op_norm(d1.reconstruct() - pn_perp.matrix() * pr.matrix()),
                             kPenroseTol));

  const SchmidtDecomposition d2 = schmidt_decompose(pn, pr, tol);
  out.values_PN_PR = d2.values();
  certs.push_back(make_check("schmidt_PN_PR", op_norm(d2.reconstruct() - pn.matrix() * pr.matrix()),
                             kPenroseTol));

  // Diagonalizations of P_R - P_N and P_R + P_N, with the eigenvector residuals.
  const DifferenceSpectrum ds = difference_spectrum(pr, pn, tol);
  const HermitianEig de_diff = hermitian_eig(pr.matrix() - pn.matrix(), tol);
  const double diff_res =
      op_norm((pr.matrix() - pn.matrix()) * de_diff.vectors -
              de_diff.vectors * de_diff.values.cast<Complex>().asDiagonal());
  certs.push_back(make_check("diagonalize_PR_minus_PN", std::max(ds.route_gap, diff_res), kPenroseTol));
  const SumSpectrum ss = sum_spectrum(pr, pn, tol);
  const HermitianEig de_sum = hermitian_eig(pr.matrix() + pn.matrix(), tol);
  const double sum_res = op_norm((pr.matrix() + pn.matrix()) * de_sum.vectors -
                                 de_sum.vectors * de_sum.values.cast<Complex>().asDiagonal());
  certs.push_back(make_check("diagonalize_PR_plus_PN", std::max(ss.route_gap, sum_res), kPenroseTol));

  const BiorthogonalBases bb = biorthogonal_bases(pr, pn, tol);
  ComplexMatrix g = bb.basis_S.matrix().adjoint() * bb.basis_T.matrix();
  for (Index i = 0; i < std::min(g.rows(), g.cols()); ++i) g(i, i) = 0.0;
  certs.push_back(make_check("biorthogonal_R_N", g.size() ? g.cwiseAbs().maxCoeff() : 0.0, kPenroseTol));

  // Cosines between R(E) and N(E) are b / sqrt(1 + b^2) over the singular values b of B.
  RealVector cosines = out.values_B;
  for (Index i = 0; i < cosines.size(); ++i) {
    cosines(i) = cosines(i) / std::sqrt(1.0 + cosines(i) * cosines(i));
  }
  certs.push_back(make_check("cosines_from_B", vector_gap(cosines, out.values_PN_PR), kPenroseTol));
  return out;
}

IdempotentDistance idempotent_geodesic_distance(const ComplexMatrix& b, const TolerancePolicy& tol) {
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw ValidationError("idempotent_geodesic_distance: B must be square and nonempty");
  }
  const Index dim = b.rows();
  const RealVector sv = singular_values(b);
  IdempotentDistance out;
  out.sigma_min = sv(dim - 1);
  out.degenerate = out.sigma_min <= tol.rank_rel * double(dim) * std::max(1.0, sv(0));
  out.closed_form =
      out.degenerate ? std::numbers::pi / 2 : std::atan(1.0 / out.sigma_min);

  const IdempotentProjections ip = idempotent_projections(b, tol);
  const GenericPartDecomposition g = generic_part(ip.P_range, ip.P_null, tol);
  const bool geo_degenerate = g.plus_part_dim + g.minus_part_dim > 0;
  if (g.dim() > 0) {
    const GeodesicData data = geodesic_exponent(g, tol);
    out.geometric = geo_degenerate ? std::numbers::pi / 2 : data.distance;
    if (!geo_degenerate) {
      // tan(theta_n) = 1 / s_n(B): the positive half of the spectrum of X.
      const RealVector pos = data.x_spectrum.tail(dim);
      RealVector predicted(dim);
      for (Index i = 0; i < dim; ++i) predicted(i) = std::atan(1.0 / sv(i));
      out.checks.push_back(make_check("tan_law", multiset_distance(pos, predicted), kDistanceTol));
    }
  } else {
    out.geometric = std::numbers::pi / 2;
  }
  out.distance = out.closed_form;
  out.checks.push_back(
      make_check("closed_form_vs_geodesic", std::abs(out.closed_form - out.geometric), kDistanceTol));
  for (const auto& c : out.checks) {
    if (!c.pass) {
      throw NumericalFailure("idempotent_geodesic_distance: " + c.name + " failed", c.residual);
    }
  }
  return out;
}

HalmosDilation halmos_dilate(const ComplexMatrix& gamma, const TolerancePolicy& tol) {
  if (gamma.rows() != gamma.cols()) throw ValidationError("halmos_dilate: Gamma must be square");
  require_finite(gamma, "halmos_dilate");
  const Index n = gamma.rows();
  const double norm = op_norm(gamma);
  if (norm > 1.0 + tol.unit_circle_tol) {
    std::ostringstream os;
    os << "halmos_dilate: ||Gamma|| = " << norm << " exceeds 1";
    throw ValidationError(os.str());
  }
  const ComplexMatrix one = identity(n);
  ComplexMatrix u(2 * n, 2 * n);
  u << gamma, defect_root(one - gamma * gamma.adjoint(), tol),
      defect_root(one - gamma.adjoint() * gamma, tol), -gamma.adjoint();

  ComplexMatrix p = ComplexMatrix::Zero(2 * n, 2 * n);
  p.topLeftCorner(n, n).setIdentity();
  ComplexMatrix corner = ComplexMatrix::Zero(2 * n, 2 * n);
  corner.topLeftCorner(n, n) = gamma;

  HalmosDilation h{gamma, u, Projection(p, tol),
                   Projection(hermitian_part(u.adjoint() * p * u), tol), 0.0, 0.0};
  if (n > 0) {
    h.unitarity_residual = op_norm(u.adjoint() * u - identity(2 * n));
    h.corner_residual = op_norm(u * h.Q_dil.matrix() * h.P_dil.matrix() - corner);
  }
  if (h.unitarity_residual > 1e-10) {
    throw NumericalFailure("halmos_dilate: U is not unitary", h.unitarity_residual);
  }
  return h;
}

DilationIntersections dilation_intersections(const HalmosDilation& h, const TolerancePolicy& tol) {
  const ComplexMatrix& g = h.Gamma;
  const Index n = g.rows();
  const ComplexMatrix one = identity(n);
  DilationIntersections out;
  out.direct = intersection_dims_direct(h.P_dil, h.Q_dil, tol);
  out.from_gamma.rr = orthonormal_nullspace(one - g.adjoint() * g, tol, 1.0).cols();
  out.from_gamma.nn = orthonormal_nullspace(one - g * g.adjoint(), tol, 1.0).cols();
  out.from_gamma.rn = orthonormal_nullspace(g, tol, 1.0).cols();
  out.from_gamma.nr = orthonormal_nullspace(g.adjoint(), tol, 1.0).cols();
  if (!(out.direct == out.from_gamma)) {
    std::ostringstream os;
    os << "dilation_intersections: projections give (" << out.direct.rr << ", " << out.direct.nn
       << ", " << out.direct.rn << ", " << out.direct.nr << "), Gamma gives ("
       << out.from_gamma.rr << ", " << out.from_gamma.nn << ", " << out.from_gamma.rn << ", "
       << out.from_gamma.nr << ")";
    throw NumericalFailure(os.str(), 1.0);
  }
  return out;
}

DilationGeometry dilation_geometry(const HalmosDilation& h, const TolerancePolicy& tol) {
  const ComplexMatrix& gamma = h.Gamma;
  const Index n = gamma.rows();
  DilationGeometry out;
  const SvdResult gs = svd(gamma);
  const RealVector& sv = gs.s;
  out.sigma_min = n ? sv(n - 1) : 0.0;
  const double thr = tol.rank_threshold(n, n, 1.0);
  out.invertible = n > 0 && out.sigma_min > thr;

  const GenericPartDecomposition g = generic_part(h.P_dil, h.Q_dil, tol);
  out.distance.plus_part_dim = g.plus_part_dim;
  out.distance.minus_part_dim = g.minus_part_dim;
  out.distance.degenerate = g.plus_part_dim + g.minus_part_dim > 0;
  out.x_spectrum = RealVector(0);
  if (g.dim() > 0) {
    const GeodesicData data = geodesic_exponent(g, tol);
    out.x_spectrum = data.x_spectrum;
    out.distance.generic_distance = data.distance;
  }
  out.distance.distance =
      out.distance.degenerate ? std::numbers::pi / 2 : out.distance.generic_distance;

  std::vector<double> predicted;
  for (Index i = 0; i < n; ++i) {
    if (sv(i) <= thr) continue;  // N(Gamma) sits in the degenerate part
    const double th = halmos_angle(sv(i), tol);
    predicted.push_back(th);
    predicted.push_back(-th);
  }
  std::sort(predicted.begin(), predicted.end());
  out.predicted_spectrum = Eigen::Map<RealVector>(predicted.data(), Index(predicted.size()));
  out.checks.push_back(make_check("x_spectrum_arccos_gamma",
                                  multiset_distance(out.x_spectrum, out.predicted_spectrum),
                                  kDistanceTol));
  const double expected =
      out.invertible ? halmos_angle(out.sigma_min, tol) : std::numbers::pi / 2;
  out.checks.push_back(make_check("distance_arccos_sigma_min",
                                  std::abs(out.distance.distance - expected), kDistanceTol));

  // QP = sum s_n (s_n xi_n; sqrt(1 - s_n^2) psi_n) (xi_n; 0)*, with Gamma xi_n = s_n psi_n.
  const ComplexMatrix qp = h.Q_dil.matrix() * h.P_dil.matrix();
  ComplexMatrix expansion = ComplexMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    const double s = sv(i);
    ComplexVector left(2 * n);
    ComplexVector right = ComplexVector::Zero(2 * n);
    const double d = (1.0 - s) * (1.0 + s);
    const double root = d <= 2.0 * tol.unit_circle_tol ? 0.0 : std::sqrt(d);
    left << s * gs.V.col(i), root * gs.U.col(i);
    right.head(n) = gs.V.col(i);
    expansion += s * left * right.adjoint();
  }
  const double exp_res = n ? op_norm(expansion - qp) : 0.0;
  out.checks.push_back(make_check("qp_expansion", exp_res, 1e-9));
  const double value_gap =
      vector_gap(schmidt_from_svd(qp, tol).values(), sv.head((sv.array() > thr).count()));
  out.checks.push_back(make_check("qp_values_are_gamma_values", value_gap, 1e-9));
  return out;
}

}  // namespace tpl
