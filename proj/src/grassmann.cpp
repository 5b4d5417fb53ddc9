#include "tpl/grassmann.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>

namespace tpl {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kConjugationTol = 1e-8;
constexpr double kSpectrumTol = 1e-8;

Projection compress(const Projection& p, const ComplexMatrix& g, const TolerancePolicy& tol) {
  return Projection(g.adjoint() * p.matrix() * g, tol);
}

double restriction_defect(const Projection& p, const ComplexMatrix& pi) {
  const Index n = p.dim();
  return op_norm((identity(n) - pi) * p.matrix() * pi);
}

}  // namespace

double residual_norm(const ComplexMatrix& m, double threshold) {
  if (m.size() == 0) return 0.0;
  const double frob = m.norm();
  return frob <= threshold ? frob : op_norm(m);
}

ComplexMatrix GenericPartDecomposition::embed(const ComplexMatrix& m) const {
  const ComplexMatrix& g = generic_frame.matrix();
  return g * m * g.adjoint();
}

GenericPartDecomposition generic_part(const Projection& p, const Projection& q,
                                      const TolerancePolicy& tol) {
  const Index n = p.dim();
  const PrincipalVectors pv = principal_vectors(p, q, tol);
  // Principal vectors with vanishing cosine span R(P)^N(Q) and N(P)^R(Q).
  const Index plus = pv.basis_S.cols() - pv.kept;
  const Index minus = pv.basis_T.cols() - pv.kept;
  ComplexMatrix degenerate(n, plus + minus);
  degenerate << pv.basis_S.rightCols(plus), pv.basis_T.rightCols(minus);
  const ComplexMatrix g = orthogonal_complement(degenerate, n);

  GenericPartDecomposition out{Frame(g),
                               Frame(degenerate),
                               compress(p, g, tol),
                               compress(q, g, tol),
                               plus,
                               minus,
                               0.0};
  const ComplexMatrix pi = g * g.adjoint();
  out.restriction_residual = std::max(restriction_defect(p, pi), restriction_defect(q, pi));
  return out;
}

ComplexMatrix davis_symmetry(const GenericPartDecomposition& g, const TolerancePolicy& tol) {
  const Index m = g.dim();
  return polar_unitary_part(g.P_prime.matrix() + g.Q_prime.matrix() - identity(m), tol);
}

DavisResiduals davis_reconstruction_check(const GenericPartDecomposition& g,
                                          const ComplexMatrix& v, const TolerancePolicy& tol) {
  const Index m = g.dim();
  const ComplexMatrix one = identity(m);
  const ComplexMatrix a = g.P_prime.matrix() - g.Q_prime.matrix();
  const ComplexMatrix root = psd_sqrt(one - a * a, tol);
  DavisResiduals out;
  if (m == 0) return out;
  out.p_residual = op_norm(g.P_prime.matrix() - 0.5 * (one + a + v * root));
  out.q_residual = op_norm(g.Q_prime.matrix() - 0.5 * (one - a + v * root));
  return out;
}

GeodesicData geodesic_exponent(const GenericPartDecomposition& g, const TolerancePolicy& tol) {
  const Index m = g.dim();
  GeodesicData out;
  if (m == 0) {
    out.V = out.X = ComplexMatrix(0, 0);
    out.x_spectrum = RealVector(0);
    return out;
  }
  const ComplexMatrix one = identity(m);
  const ComplexMatrix& p = g.P_prime.matrix();
  const ComplexMatrix& q = g.Q_prime.matrix();
  const ComplexMatrix a = p - q;

  out.V = davis_symmetry(g, tol);
  out.X = principal_log_unitary(out.V * (2.0 * p - one), tol);
  const ComplexMatrix& v = out.V;
  const ComplexMatrix& x = out.X;

  const HermitianEig xe = hermitian_eig(x, tol);
  out.x_spectrum = xe.values;
  out.distance = xe.values.cwiseAbs().maxCoeff();

  // Angles from the Schmidt data of P'Q'.
  const SchmidtDecomposition d = schmidt_decompose(g.P_prime, g.Q_prime, tol);
  std::vector<double> angles;
  for (const auto& t : d.triples) {
    if (!t.shared) angles.push_back(std::atan2(t.sine, t.s));
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> predicted(static_cast<std::size_t>(m) - 2 * angles.size(), 0.0);
  for (double th : angles) {
    predicted.push_back(th);
    predicted.push_back(-th);
  }
  std::sort(predicted.begin(), predicted.end());
  const RealVector angle_vec = Eigen::Map<const RealVector>(angles.data(), Index(angles.size()));
  for (const Cluster& c : cluster_sorted(angle_vec, tol.spectral_match)) {
    out.theta.emplace_back(c.center, c.multiplicity);
  }
  const double max_theta = angles.empty() ? 0.0 : angles.back();

  const ComplexMatrix ex = expi_hermitian(x, 1.0, tol);
  const ComplexMatrix half = expi_hermitian(x, 0.5, tol);
  const ComplexMatrix root = psd_sqrt(one - a * a, tol);
  const ComplexMatrix pc = one - p;

  auto add = [&](const char* name, const ComplexMatrix& r, double thr) {
    out.checks.push_back(make_check(name, residual_norm(r, thr), thr));
  };
  add("V_hermitian", v - v.adjoint(), kSymmetryTol);
  add("V_involution", v * v - one, kSymmetryTol);
  add("V_swaps_P_to_Q", v * p * v - q, kSymmetryTol);
  add("V_swaps_Q_to_P", v * q * v - p, kSymmetryTol);
  add("V_anticommutes_with_A", v * a + a * v, kSymmetryTol);
  add("X_hermitian", x - x.adjoint(), kSymmetryTol);
  out.checks.push_back(
      make_check("X_norm_at_most_half_pi", std::max(0.0, out.distance - std::numbers::pi / 2), kSymmetryTol));
  add("X_codiagonal_P", p * x * p, kSymmetryTol);
  add("X_codiagonal_1-P", pc * x * pc, kSymmetryTol);
  add("exp_iX_conjugates_P_to_Q", ex * p * ex.adjoint() - q, kConjugationTol);
  add("exp_iX_formula", ex - (v * a + root), kSymmetryTol);
  add("midpoint", half * p * half.adjoint() - 0.5 * (one + v), kConjugationTol);
  out.checks.push_back(make_check(
      "X_spectrum_arccos_s",
      multiset_distance(xe.values, Eigen::Map<const RealVector>(predicted.data(), m)), kSpectrumTol));
  out.checks.push_back(
      make_check("distance_is_max_theta", std::abs(out.distance - max_theta), kSpectrumTol));

  for (const auto& c : out.checks) {
    if (!c.pass) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", c.residual);
      throw NumericalFailure("geodesic_exponent: check " + c.name + " failed (residual " + buf + ")",
                             c.residual);
    }
  }
  return out;
}

std::vector<EigenPair> exponent_diagonalization(const GenericPartDecomposition& g,
                                                const GeodesicData& data,
                                                const SchmidtDecomposition& d,
                                                const TolerancePolicy& tol) {
  if (d.dim != g.dim()) {
    throw ValidationError("exponent_diagonalization: Schmidt data do not live on H'");
  }
  std::vector<ComplexVector> nus;
  std::vector<double> thetas;
  std::vector<double> lambdas;
  for (const auto& t : d.triples) {
    if (t.shared) continue;
    const double lambda = t.sine;
    nus.push_back(((t.s / (1.0 + lambda)) * t.xi + t.zeta).normalized());
    thetas.push_back(std::atan2(t.sine, t.s));
    lambdas.push_back(lambda);
  }
  // Orthonormal nu basis inside each lambda cluster; omega = V nu then pairs it.
  for (std::size_t i = 0; i < nus.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(lambdas[i] - lambdas[j]) < tol.spectral_match) {
        nus[i] -= nus[j].dot(nus[i]) * nus[j];
      }
    }
    nus[i].normalize();
  }
  const Complex i_unit(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<EigenPair> out;
  for (std::size_t k = 0; k < nus.size(); ++k) {
    const ComplexVector omega = data.V * nus[k];
    out.push_back({thetas[k], r * (nus[k] - i_unit * omega)});
    out.push_back({-thetas[k], r * (nus[k] + i_unit * omega)});
  }
  return out;
}

Projection geodesic_point(const GenericPartDecomposition& g, const GeodesicData& data, double t,
                          const TolerancePolicy& tol) {
  const ComplexMatrix u = expi_hermitian(data.X, t, tol);
  return Projection(hermitian_part(u * g.P_prime.matrix() * u.adjoint()), tol);
}

DistanceReport geodesic_distance(const Projection& p, const Projection& q,
                                 const TolerancePolicy& tol) {
  const GenericPartDecomposition g = generic_part(p, q, tol);
  DistanceReport out;
  out.plus_part_dim = g.plus_part_dim;
  out.minus_part_dim = g.minus_part_dim;
  out.degenerate = g.plus_part_dim + g.minus_part_dim > 0;
  out.generic_distance = geodesic_exponent(g, tol).distance;
  out.distance = out.degenerate ? std::numbers::pi / 2 : out.generic_distance;
  return out;
}

}  // namespace tpl
