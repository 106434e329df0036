#pragma once

#include <Eigen/Dense>

#include "schur/matrix.hpp"

namespace schur::detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXd& m) {
  ComplexMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

}  // namespace schur::detail
