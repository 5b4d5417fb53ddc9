#include "tpl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace tpl {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

}  // namespace

void TolerancePolicy::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"rank_rel", rank_rel},
      {"spectral_match", spectral_match},
      {"idempotent_tol", idempotent_tol},
      {"unit_circle_tol", unit_circle_tol},
  };
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0 && value < 1e-2)) {
      std::ostringstream os;
      os << "tolerance " << name << " = " << value << " outside (0, 1e-2)";
      throw ValidationError(os.str());
    }
  }
}

double TolerancePolicy::rank_threshold(Index rows, Index cols, double scale) const {
  return rank_rel * static_cast<double>(std::max<Index>({rows, cols, 1})) * scale;
}

ComplexMatrix to_complex(const Eigen::MatrixXd& m) { return m.cast<Complex>(); }

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": matrix has non-finite entries");
  }
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (0.5 * (m + m.adjoint())).eval();
}

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

namespace {

bool svd_sane(const SvdResult& r, const ComplexMatrix& m) {
  if (!r.U.allFinite() || !r.V.allFinite() || !r.s.allFinite()) return false;
  const double tol = 1e-10;
  if ((r.U.adjoint() * r.U - identity(r.U.cols())).cwiseAbs().maxCoeff() > tol) return false;
  if ((r.V.adjoint() * r.V - identity(r.V.cols())).cwiseAbs().maxCoeff() > tol) return false;
  const Index k = r.s.size();
  const double err = (r.U.leftCols(k) * r.s.cast<Complex>().asDiagonal() *
                          r.V.leftCols(k).adjoint() -
                      m)
                         .norm();
  return err <= tol * std::max(1.0, m.norm());
}

// LAPACK zgesdd, retried with zgesvd when divide and conquer fails.
// Eigen's BDCSVD is avoided: in 3.4.0 it reads out of bounds on some
// matrices with many exactly deflated singular values.
lapack_int lapack_svd(char job, ComplexMatrix a, RealVector& s, ComplexMatrix& u,
                      ComplexMatrix& vt) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  s.resize(k);
  const lapack_int ucols = job == 'A' ? m : (job == 'S' ? k : 1);
  const lapack_int vtrows = job == 'A' ? n : (job == 'S' ? k : 1);
  u.resize(m, ucols);
  vt.resize(vtrows, n);
  const ComplexMatrix saved = a;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, job, m, n, a.data(), m, s.data(), u.data(),
                                   m, vt.data(), vtrows);
  if (info != 0) {
    a = saved;
    std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(k, 1)));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, m, n, a.data(), m, s.data(), u.data(), m,
                          vt.data(), vtrows, superb.data());
  }
  return info;
}

}  // namespace

SvdResult svd(const ComplexMatrix& m, bool full) {
  require_finite(m, "svd");
  SvdResult out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.U = full ? identity(m.rows()) : ComplexMatrix(m.rows(), 0);
    out.V = full ? identity(m.cols()) : ComplexMatrix(m.cols(), 0);
    out.s = RealVector(0);
    return out;
  }
  ComplexMatrix vt;
  const lapack_int info = lapack_svd(full ? 'A' : 'S', m, out.s, out.U, vt);
  out.V = vt.adjoint();
  if (info != 0 || !svd_sane(out, m)) {
    throw NumericalFailure("svd did not converge", std::numeric_limits<double>::infinity());
  }
  return out;
}

RealVector singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values");
  if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
  RealVector s;
  ComplexMatrix u;
  ComplexMatrix vt;
  if (lapack_svd('N', m, s, u, vt) != 0 || !s.allFinite()) {
    throw NumericalFailure("singular value computation did not converge",
                           std::numeric_limits<double>::infinity());
  }
  return s;
}

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

HermitianEig hermitian_eig(const ComplexMatrix& m, const TolerancePolicy& tol) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  const double skew = (m - m.adjoint()).norm();
  if (skew > tol.idempotent_tol * std::max(1.0, m.norm())) {
    std::ostringstream os;
    os << "hermitian_eig: matrix is not Hermitian (||M - M*||_F = " << skew << ")";
    throw ValidationError(os.str());
  }
  HermitianEig out;
  if (m.rows() == 0) {
    out.values = RealVector(0);
    out.vectors = ComplexMatrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("hermitian eigensolver did not converge", skew);
  }
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f,
                                 const TolerancePolicy& tol) {
  const HermitianEig e = hermitian_eig(m, tol);
  RealVector fv(e.values.size());
  for (Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
  return hermitian_part(e.vectors * fv.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const TolerancePolicy& tol) {
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  return hermitian_function(
      m,
      [&](double x) {
        if (x < -tol.idempotent_tol * scale) {
          throw ValidationError("psd_sqrt: matrix has a negative eigenvalue " +
                                std::to_string(x));
        }
        return std::sqrt(std::max(x, 0.0));
      },
      tol);
}

ComplexMatrix expi_hermitian(const ComplexMatrix& x, double t, const TolerancePolicy& tol) {
  const HermitianEig e = hermitian_eig(x, tol);
  ComplexVector phases(e.values.size());
  for (Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, t * e.values(i));
  }
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix polar_unitary_part(const ComplexMatrix& m, const TolerancePolicy& tol) {
  require_square(m, "polar_unitary_part");
  require_finite(m, "polar_unitary_part");
  const Index n = m.rows();
  if (n == 0) return ComplexMatrix(0, 0);

  const bool is_hermitian =
      (m - m.adjoint()).norm() <= tol.idempotent_tol * std::max(1.0, m.norm());
  if (is_hermitian) {
    // Sign function of the spectrum; exactly Hermitian output.
    const HermitianEig e = hermitian_eig(m, tol);
    const double sigma_max = e.values.cwiseAbs().maxCoeff();
    const double sigma_min = e.values.cwiseAbs().minCoeff();
    if (sigma_min <= tol.rank_threshold(n, n, sigma_max)) {
      throw RankDeficiencyError(
          "polar_unitary_part: sigma_min = " + std::to_string(sigma_min) + " below rank threshold",
          sigma_min);
    }
    RealVector sign(n);
    for (Index i = 0; i < n; ++i) sign(i) = e.values(i) > 0 ? 1.0 : -1.0;
    return hermitian_part(e.vectors * sign.cast<Complex>().asDiagonal() * e.vectors.adjoint());
  }

  const SvdResult d = svd(m, true);
  const double sigma_min = d.s(n - 1);
  if (sigma_min <= tol.rank_threshold(n, n, d.s(0))) {
    throw RankDeficiencyError(
        "polar_unitary_part: sigma_min = " + std::to_string(sigma_min) + " below rank threshold",
        sigma_min);
  }
  return d.U * d.V.adjoint();
}

ComplexMatrix principal_log_unitary(const ComplexMatrix& u, const TolerancePolicy& tol) {
  require_square(u, "principal_log_unitary");
  require_finite(u, "principal_log_unitary");
  const Index n = u.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  const double defect = (u.adjoint() * u - identity(n)).norm();
  if (defect > tol.unit_circle_tol) {
    std::ostringstream os;
    os << "principal_log_unitary: input is not unitary (||U*U - 1||_F = " << defect << ")";
    throw ValidationError(os.str());
  }
  // A unitary matrix is normal, so its Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw NumericalFailure("principal_log_unitary: Schur decomposition did not converge", defect);
  }
  const ComplexMatrix& z = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();
  RealVector angles(n);
  for (Index i = 0; i < n; ++i) {
    const Complex lambda = t(i, i);
    if (std::abs(lambda + 1.0) <= tol.unit_circle_tol) {
      throw BranchCutError("principal_log_unitary: eigenvalue at -1 (branch cut)",
                           std::abs(lambda + 1.0));
    }
    angles(i) = std::arg(lambda);
  }
  return hermitian_part(z * angles.cast<Complex>().asDiagonal() * z.adjoint());
}

ComplexMatrix orthonormal_nullspace(const ComplexMatrix& m, const TolerancePolicy& tol,
                                    double scale_floor) {
  const Index cols = m.cols();
  if (m.rows() == 0) return identity(cols);
  if (cols == 0) return ComplexMatrix(0, 0);
  const SvdResult d = svd(m, true);
  const double sigma_max = d.s.size() ? d.s(0) : 0.0;
  const double threshold = tol.rank_threshold(m.rows(), cols, std::max(sigma_max, scale_floor));
  Index rank = 0;
  while (rank < d.s.size() && d.s(rank) > threshold) ++rank;
  return d.V.rightCols(cols - rank);
}

ComplexMatrix orthogonal_complement(const ComplexMatrix& frame, Index ambient) {
  const Index k = frame.cols();
  if (k == 0) return identity(ambient);
  if (frame.rows() != ambient) {
    throw ValidationError("orthogonal_complement: frame does not match the ambient dimension");
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(frame);
  const ComplexMatrix q = qr.householderQ() * identity(ambient);
  return q.rightCols(ambient - k);
}

std::vector<Cluster> cluster_sorted(const RealVector& sorted, double gap) {
  std::vector<Cluster> out;
  Index i = 0;
  const Index n = sorted.size();
  while (i < n) {
    Index j = i + 1;
    while (j < n && sorted(j) - sorted(j - 1) < gap) ++j;
    Cluster c;
    c.first = i;
    c.multiplicity = j - i;
    c.center = sorted.segment(i, j - i).mean();
    out.push_back(c);
    i = j;
  }
  return out;
}

double multiset_distance(RealVector a, RealVector b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  std::sort(a.data(), a.data() + a.size());
  std::sort(b.data(), b.data() + b.size());
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace tpl
