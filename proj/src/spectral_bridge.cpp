#include "tpl/spectral_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace tpl {

namespace {

std::string format_values(const RealVector& v) {
  std::ostringstream os;
  os.precision(12);
  os << "[";
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

RealVector sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return Eigen::Map<RealVector>(v.data(), static_cast<Index>(v.size()));
}

void sort_triples(std::vector<SchmidtTriple>& triples) {
  std::stable_sort(triples.begin(), triples.end(),
                   [](const SchmidtTriple& a, const SchmidtTriple& b) { return a.s > b.s; });
}

// Modified Gram-Schmidt over a list of vectors, in place.
void orthonormalize(std::vector<ComplexVector*>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      *vs[i] -= vs[j]->dot(*vs[i]) * *vs[j];
    }
    vs[i]->normalize();
  }
}

}  // namespace

RealVector SchmidtDecomposition::values() const {
  RealVector v(static_cast<Index>(triples.size()));
  for (std::size_t i = 0; i < triples.size(); ++i) v(static_cast<Index>(i)) = triples[i].s;
  return v;
}

// Rectangular operators (schmidt_from_svd) have xi in the domain, psi in the codomain.
ComplexMatrix SchmidtDecomposition::psi_matrix() const {
  ComplexMatrix m(triples.empty() ? dim : triples[0].psi.size(), static_cast<Index>(triples.size()));
  for (std::size_t i = 0; i < triples.size(); ++i) m.col(static_cast<Index>(i)) = triples[i].psi;
  return m;
}

ComplexMatrix SchmidtDecomposition::xi_matrix() const {
  ComplexMatrix m(triples.empty() ? dim : triples[0].xi.size(), static_cast<Index>(triples.size()));
  for (std::size_t i = 0; i < triples.size(); ++i) m.col(static_cast<Index>(i)) = triples[i].xi;
  return m;
}

ComplexMatrix SchmidtDecomposition::reconstruct() const {
  return psi_matrix() * values().cast<Complex>().asDiagonal() * xi_matrix().adjoint();
}

double padded_value_gap(const RealVector& a, const RealVector& b) {
  const Index n = std::max(a.size(), b.size());
  RealVector pa = RealVector::Zero(n);
  RealVector pb = RealVector::Zero(n);
  pa.head(a.size()) = a;
  pb.head(b.size()) = b;
  std::sort(pa.data(), pa.data() + n, std::greater<>());
  std::sort(pb.data(), pb.data() + n, std::greater<>());
  return n ? (pa - pb).cwiseAbs().maxCoeff() : 0.0;
}

PrincipalVectors principal_vectors(const Projection& p, const Projection& q,
                                   const TolerancePolicy& tol) {
  require_same_dim(p, q);
  const Index n = p.dim();
  const ComplexMatrix fp = p.range_frame();
  const ComplexMatrix fq = q.range_frame();
  const ComplexMatrix fn = q.kernel_frame();
  const Index rp = fp.cols();
  const Index rq = fq.cols();
  const Index m = std::min(rp, rq);
  // F_P = F_Q c* + F_N sn*: both pieces come from inner products of
  // orthonormal frames, so neither small cosines nor small sines cancel.
  const ComplexMatrix c = fp.adjoint() * fq;
  const ComplexMatrix sn = fn.adjoint() * fp;
  const SvdResult cos_svd = svd(c, true);

  // Cosines resolve large angles; small angles (cos^2 >= 1/2) are taken from
  // the SVD of sn, whose singular values are the sines.
  Index split = 0;
  while (split < m && cos_svd.s(split) * cos_svd.s(split) >= 0.5) ++split;
  SvdResult sin_svd;
  if (split > 0) sin_svd = svd(sn, true);

  ComplexMatrix y(rp, m);
  ComplexMatrix z(rq, m);
  PrincipalVectors out;
  out.cosines = RealVector::Zero(m);
  out.sines = RealVector::Zero(m);
  out.sine_vectors = ComplexMatrix::Zero(n, m);
  for (Index k = 0; k < m; ++k) {
    ComplexVector w;
    if (k < split) {
      const Index j = rp - 1 - k;  // smallest sines sit at the end
      y.col(k) = sin_svd.V.col(j);
      out.sines(k) = j < sin_svd.s.size() ? sin_svd.s(j) : 0.0;
      w = j < sin_svd.U.cols() ? ComplexVector(sin_svd.U.col(j)) : ComplexVector::Zero(fn.cols());
      const ComplexVector cy = c.adjoint() * y.col(k);
      out.cosines(k) = std::min(cy.norm(), 1.0);
      z.col(k) = cy / cy.norm();
    } else {
      y.col(k) = cos_svd.U.col(k);
      z.col(k) = cos_svd.V.col(k);
      out.cosines(k) = std::min(cos_svd.s(k), 1.0);
      w = sn * y.col(k);
      out.sines(k) = w.norm();
      if (out.sines(k) > 0.0) w /= out.sines(k);
    }
    if (fn.cols() > 0) out.sine_vectors.col(k) = fn * w;
  }
  const double thr = tol.rank_threshold(n, n, 1.0);
  while (out.kept < m && out.cosines(out.kept) > thr) ++out.kept;

  // Extension vectors: orthogonal completions inside R(P) and R(Q).
  const ComplexMatrix yk = y.leftCols(out.kept);
  const ComplexMatrix zk = z.leftCols(out.kept);
  ComplexMatrix ys(rp, rp);
  ys << yk, orthogonal_complement(yk, rp);
  ComplexMatrix zs(rq, rq);
  zs << zk, orthogonal_complement(zk, rq);
  out.basis_S = fp * ys;
  out.basis_T = fq * zs;
  return out;
}

SchmidtDecomposition schmidt_decompose(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol) {
  const PrincipalVectors pv = principal_vectors(p, q, tol);
  SchmidtDecomposition out;
  out.dim = p.dim();
  for (Index k = 0; k < pv.kept; ++k) {
    SchmidtTriple t;
    t.s = pv.cosines(k);
    t.sine = pv.sines(k);
    t.psi = pv.basis_S.col(k);
    t.xi = pv.basis_T.col(k);
    t.zeta = pv.sine_vectors.col(k);
    if (t.sine <= tol.spectral_match) {
      // psi and xi coincide up to rounding: a vector of R(P) and R(Q).
      t.s = 1.0;
      t.sine = 0.0;
      t.psi = (t.psi + t.xi).normalized();
      t.xi = t.psi;
      t.shared = true;
      ++out.dim_ones;
    }
    out.triples.push_back(std::move(t));
  }
  sort_triples(out.triples);
  return out;
}

SchmidtDecomposition schmidt_from_svd(const ComplexMatrix& t, const TolerancePolicy& tol) {
  const SvdResult d = svd(t);
  SchmidtDecomposition out;
  out.dim = t.rows();
  const double sigma_max = d.s.size() ? d.s(0) : 0.0;
  const double thr = tol.rank_threshold(t.rows(), t.cols(), sigma_max);
  for (Index k = 0; k < d.s.size() && d.s(k) > thr; ++k) {
    SchmidtTriple tr;
    tr.s = d.s(k);
    tr.psi = d.U.col(k);
    tr.xi = d.V.col(k);
    tr.sine = std::sqrt(std::max(0.0, 1.0 - tr.s * tr.s));
    if (std::abs(tr.s - 1.0) <= tol.spectral_match) {
      tr.shared = true;
      ++out.dim_ones;
    }
    out.triples.push_back(std::move(tr));
  }
  return out;
}

IntersectionDims intersection_dims(const Projection& p, const Projection& q,
                                   const SchmidtDecomposition& d) {
  IntersectionDims out;
  const Index rank_t = static_cast<Index>(d.triples.size());
  out.rr = d.dim_ones;
  out.rn = p.rank() - rank_t;
  out.nr = q.rank() - rank_t;
  out.nn = p.dim() - p.rank() - q.rank() + d.dim_ones;
  return out;
}

IntersectionDims intersection_dims_direct(const Projection& p, const Projection& q,
                                          const TolerancePolicy& tol) {
  require_same_dim(p, q);
  const Index n = p.dim();
  const ComplexMatrix& pm = p.matrix();
  const ComplexMatrix& qm = q.matrix();
  const ComplexMatrix pc = identity(n) - pm;
  const ComplexMatrix qc = identity(n) - qm;
  auto kernel_dim = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix stacked(2 * n, n);
    stacked << a, b;
    return orthonormal_nullspace(stacked, tol, 1.0).cols();
  };
  IntersectionDims out;
  out.rr = kernel_dim(pc, qc);
  out.nn = kernel_dim(pm, qm);
  out.rn = kernel_dim(pc, qm);
  out.nr = kernel_dim(pm, qc);
  return out;
}

BiorthogonalBases biorthogonal_bases(const Projection& p, const Projection& q,
                                     const TolerancePolicy& tol) {
  const PrincipalVectors pv = principal_vectors(p, q, tol);
  return {Frame(pv.basis_S), Frame(pv.basis_T)};
}

bool isometry_diagonality_check(const Frame& x, const Frame& y) {
  if (x.dim() != y.dim()) {
    throw ValidationError("isometry_diagonality_check: frames live in different spaces");
  }
  ComplexMatrix g = x.matrix().adjoint() * y.matrix();
  const Index k = std::min(g.rows(), g.cols());
  for (Index i = 0; i < k; ++i) g(i, i) = 0.0;
  return g.size() == 0 || g.cwiseAbs().maxCoeff() <= 1e-10;
}

DifferenceSpectrum difference_spectrum(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol) {
  const SchmidtDecomposition d = schmidt_decompose(p, q, tol);
  const IntersectionDims dims = intersection_dims(p, q, d);
  const double tau = tol.spectral_match;

  DifferenceSpectrum out;
  out.plus_one_mult = dims.rn;
  out.minus_one_mult = dims.nr;
  out.zero_mult = dims.rr + dims.nn;

  out.direct = hermitian_eig(p.matrix() - q.matrix(), tol).values;

  std::vector<double> predicted;
  std::vector<double> lambdas;
  for (const auto& t : d.triples) {
    if (t.shared) continue;
    predicted.push_back(t.sine);
    predicted.push_back(-t.sine);
    lambdas.push_back(t.sine);
  }
  predicted.insert(predicted.end(), static_cast<std::size_t>(dims.rn), 1.0);
  predicted.insert(predicted.end(), static_cast<std::size_t>(dims.nr), -1.0);
  predicted.insert(predicted.end(), static_cast<std::size_t>(out.zero_mult), 0.0);
  out.predicted = sorted(predicted);

  out.route_gap = multiset_distance(out.direct, out.predicted);
  if (!(out.route_gap <= tau)) {
    throw NumericalFailure("difference_spectrum: eig(P-Q) = " + format_values(out.direct) +
                               " but Schmidt data predict " + format_values(out.predicted),
                           out.route_gap);
  }

  // Drop the +1 and -1 parts; what remains must be symmetric about zero.
  const Index n = out.direct.size();
  const RealVector mid = out.direct.segment(dims.nr, n - dims.nr - dims.rn);
  const Index m = mid.size();
  for (Index i = 0; i < m; ++i) {
    out.pairing_gap = std::max(out.pairing_gap, std::abs(mid(i) + mid(m - 1 - i)));
  }
  if (out.pairing_gap > tau) {
    throw NumericalFailure("difference_spectrum: +lambda and -lambda multiplicities differ",
                           out.pairing_gap);
  }

  const RealVector lam = sorted(lambdas);
  for (const Cluster& c : cluster_sorted(lam, tau)) {
    out.paired.emplace_back(c.center, c.multiplicity);
  }
  return out;
}

std::vector<EigenPair> difference_eigenvectors(const Projection& p, const Projection& q,
                                               const TolerancePolicy& tol) {
  const SchmidtDecomposition d = schmidt_decompose(p, q, tol);
  std::vector<EigenPair> plus;
  std::vector<EigenPair> minus;
  for (const auto& t : d.triples) {
    if (t.shared) continue;
    const double lambda = t.sine;
    // psi = s xi + lambda zeta with zeta in N(Q), so (lambda - 1) xi + s psi
    // is lambda s ((s / (1 + lambda)) xi + zeta): no cancellation at either end.
    EigenPair nu{lambda, ((t.s / (1.0 + lambda)) * t.xi + t.zeta).normalized()};
    EigenPair omega{-lambda, (-(1.0 + lambda) * t.xi + t.s * t.zeta).normalized()};
    plus.push_back(std::move(nu));
    minus.push_back(std::move(omega));
  }
  // Triples are ordered by s, so equal lambdas are adjacent.
  std::size_t i = 0;
  while (i < plus.size()) {
    std::size_t j = i + 1;
    while (j < plus.size() && std::abs(plus[j].value - plus[j - 1].value) < tol.spectral_match) ++j;
    if (j - i > 1) {
      std::vector<ComplexVector*> a;
      std::vector<ComplexVector*> b;
      for (std::size_t k = i; k < j; ++k) {
        a.push_back(&plus[k].vector);
        b.push_back(&minus[k].vector);
      }
      orthonormalize(a);
      orthonormalize(b);
    }
    i = j;
  }
  std::vector<EigenPair> out;
  for (std::size_t k = 0; k < plus.size(); ++k) {
    out.push_back(std::move(plus[k]));
    out.push_back(std::move(minus[k]));
  }
  return out;
}

SchmidtDecomposition product_from_difference(const Projection& p, const Projection& q,
                                             const TolerancePolicy& tol) {
  require_same_dim(p, q);
  const Index n = p.dim();
  const double tau = tol.spectral_match;
  const ComplexMatrix a = p.matrix() - q.matrix();
  const ComplexMatrix sym = p.matrix() + q.matrix() - identity(n);
  const HermitianEig e = hermitian_eig(a, tol);
  const double thr = tol.rank_threshold(n, n, 1.0);

  SchmidtDecomposition out;
  out.dim = n;
  for (const Cluster& c : cluster_sorted(e.values, tau)) {
    const ComplexMatrix frame = e.vectors.middleCols(c.first, c.multiplicity);
    if (std::abs(c.center) <= tau) {
      // N(A) = R(P)^R(Q) + N(P)^N(Q); P separates the two.
      const HermitianEig pe = hermitian_eig(frame.adjoint() * p.matrix() * frame, tol);
      for (Index k = 0; k < pe.values.size(); ++k) {
        if (pe.values(k) < 0.5) continue;
        SchmidtTriple t;
        t.s = 1.0;
        t.psi = frame * pe.vectors.col(k);
        t.xi = t.psi;
        out.triples.push_back(std::move(t));
        ++out.dim_ones;
      }
      continue;
    }
    if (c.center < 0) continue;  // reached through P + Q - 1 from the +lambda side
    // P + Q - 1 maps the +lambda eigenspace onto the -lambda one with gain s.
    const SvdResult w = svd(sym * frame);
    for (Index k = 0; k < w.s.size(); ++k) {
      const double s = w.s(k);
      if (s <= thr) continue;  // R(P) and N(Q)
      const ComplexVector nu = frame * w.V.col(k);
      const ComplexVector omega = w.U.col(k);
      const double lambda = nu.dot(a * nu).real();
      // PQ in the basis (nu, omega).
      Eigen::Matrix2d m;
      m << s * s, (1.0 + lambda) * s, (1.0 - lambda) * s, s * s;
      m *= 0.5;
      Eigen::JacobiSVD<Eigen::Matrix2d> block(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      SchmidtTriple t;
      t.s = std::min(block.singularValues()(0), 1.0);
      t.sine = lambda;
      t.psi = block.matrixU()(0, 0) * nu + block.matrixU()(1, 0) * omega;
      t.xi = block.matrixV()(0, 0) * nu + block.matrixV()(1, 0) * omega;
      out.triples.push_back(std::move(t));
    }
  }
  sort_triples(out.triples);

  const SchmidtDecomposition direct = schmidt_decompose(p, q, tol);
  const double gap = padded_value_gap(out.values(), direct.values());
  if (!(gap <= tau)) {
    throw NumericalFailure("product_from_difference: values " + format_values(out.values()) +
                               " differ from the direct Schmidt values " +
                               format_values(direct.values()),
                           gap);
  }
  return out;
}

SumSpectrum sum_spectrum(const Projection& p, const Projection& q, const TolerancePolicy& tol) {
  const SchmidtDecomposition d = schmidt_decompose(p, q, tol);
  const IntersectionDims dims = intersection_dims(p, q, d);
  SumSpectrum out;
  out.direct = hermitian_eig(p.matrix() + q.matrix(), tol).values;
  std::vector<double> predicted;
  for (const auto& t : d.triples) {
    if (t.shared) continue;
    predicted.push_back(1.0 + t.s);
    predicted.push_back(1.0 - t.s);
  }
  predicted.insert(predicted.end(), static_cast<std::size_t>(dims.nn), 0.0);
  predicted.insert(predicted.end(), static_cast<std::size_t>(dims.rr), 2.0);
  predicted.insert(predicted.end(), static_cast<std::size_t>(dims.rn + dims.nr), 1.0);
  out.predicted = sorted(predicted);
  out.route_gap = multiset_distance(out.direct, out.predicted);
  if (!(out.route_gap <= tol.spectral_match)) {
    throw NumericalFailure("sum_spectrum: eig(P+Q) = " + format_values(out.direct) +
                               " but Schmidt data predict " + format_values(out.predicted),
                           out.route_gap);
  }
  return out;
}

ComplementTransfer complement_transfer(const Projection& p, const Projection& q,
                                       const TolerancePolicy& tol) {
  const Projection pc = p.complement();
  const Projection qc = q.complement();
  ComplementTransfer out{schmidt_decompose(p, q, tol), schmidt_decompose(p, qc, tol),
                         schmidt_decompose(pc, q, tol), schmidt_decompose(pc, qc, tol), 0.0};
  const Index n = p.dim();
  const ComplexMatrix& pm = p.matrix();
  const RealVector direct =
      hermitian_eig(identity(n) - pm * q.matrix() * pm, tol).values;
  std::vector<double> predicted(static_cast<std::size_t>(n - p.rank()), 1.0);
  for (const auto& t : out.pq.triples) predicted.push_back(1.0 - t.s * t.s);
  predicted.insert(predicted.end(),
                   static_cast<std::size_t>(p.rank() - static_cast<Index>(out.pq.triples.size())),
                   1.0);
  out.bookkeeping_gap = multiset_distance(direct, sorted(predicted));
  return out;
}

ComplexMatrix schmidt_pseudoinverse(const SchmidtDecomposition& d) {
  ComplexMatrix out = ComplexMatrix::Zero(d.dim, d.dim);
  for (const auto& t : d.triples) out += (1.0 / t.s) * t.xi * t.psi.adjoint();
  return out;
}

}  // namespace tpl
