#pragma once

#include <cmath>
#include <numbers>

#include "tpl/projection.hpp"

namespace tpl::testing {

inline constexpr double kPi = std::numbers::pi;

// Projection onto span{(cos a, sin a)} in C^2.
inline Projection line(double a) {
  Eigen::MatrixXd f(2, 1);
  f << std::cos(a), std::sin(a);
  return projection_from_frame(Frame(to_complex(f)));
}

inline Projection diag_projection(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return Projection(to_complex(v.asDiagonal().toDenseMatrix()));
}

inline ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

// Two lines at angles a1 and a2 in two orthogonal planes of C^4.
struct TwoAnglePair {
  Projection P;
  Projection Q;
};
inline TwoAnglePair two_angle_pair(double a1, double a2) {
  const ComplexMatrix p = block_diag(line(0).matrix(), line(0).matrix());
  const ComplexMatrix q = block_diag(line(a1).matrix(), line(a2).matrix());
  return {Projection(p), Projection(q)};
}

inline ComplexMatrix real_matrix(Index r, Index c, std::initializer_list<double> v) {
  Eigen::MatrixXd m(r, c);
  auto it = v.begin();
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = *it++;
  return to_complex(m);
}

}  // namespace tpl::testing
