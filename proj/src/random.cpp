#include "tpl/random.hpp"

#include <Eigen/QR>

namespace tpl {

ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  // Column-major fill keeps the stream order fixed.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ComplexMatrix random_frame(Index n, Index k, Rng& rng) {
  if (k == 0) return ComplexMatrix(n, 0);
  Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(n, k, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, k);
}

Projection random_projection(Index n, Index k, Rng& rng, const TolerancePolicy& tol) {
  return projection_from_frame(Frame(random_frame(n, k, rng)), tol);
}

Index uniform_index(Index lo, Index hi, Rng& rng) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

}  // namespace tpl
