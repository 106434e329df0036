#include "schur/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eigen_bridge.hpp"

namespace schur {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotBijective: return "NotBijective";
    case ErrorCode::NotNullPreserving: return "NotNullPreserving";
    case ErrorCode::ImageNotMonomial: return "ImageNotMonomial";
    case ErrorCode::NotMultiplicative: return "NotMultiplicative";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

void require_positive_shape(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw Error(ErrorCode::InvalidArgument,
                "matrix shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " must be at least 1x1");
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (!a.same_shape(b))
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
}

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require_positive_shape(rows, cols);
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), Complex{});
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_positive_shape(rows, cols);
  if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(rows * cols) +
                                              " entries, got " + std::to_string(data_.size()));
  if (!all_finite()) throw Error(ErrorCode::NonFinite, "matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows.begin()->size());
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(std::max(n, 0)));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw Error(ErrorCode::ShapeMismatch, "ragged row list");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(m, n, std::move(entries));
}

ComplexMatrix ComplexMatrix::ones(int rows, int cols) {
  ComplexMatrix out(rows, cols);
  std::fill(out.data_.begin(), out.data_.end(), Complex{1.0, 0.0});
  return out;
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix out(n, n);
  for (int k = 0; k < n; ++k) out(k, k) = 1.0;
  return out;
}

Complex ComplexMatrix::at(EntryIndex idx) const {
  if (!contains(idx))
    throw Error(ErrorCode::IndexOutOfRange,
                "(" + std::to_string(idx.i) + "," + std::to_string(idx.j) + ") outside " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  return (*this)(idx.i - 1, idx.j - 1);
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out(*this);
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

double ComplexMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (const auto& z : data_) best = std::max(best, std::abs(z));
  return best;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) noexcept {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::ShapeMismatch, "matmul inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int k = 0; k < a.cols(); ++k) {
      const Complex s = a(r, k);
      if (s == Complex{}) continue;
      for (int c = 0; c < b.cols(); ++c) out(r, c) += s * b(k, c);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) best = std::max(best, std::abs(a(r, c) - b(r, c)));
  return best;
}

ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "schur_product");
  ComplexMatrix out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) * b(r, c);
  return out;
}

ComplexMatrix matrix_unit(int m, int n, EntryIndex idx) {
  ComplexMatrix out(m, n);
  if (!out.contains(idx))
    throw Error(ErrorCode::IndexOutOfRange,
                "matrix unit (" + std::to_string(idx.i) + "," + std::to_string(idx.j) +
                    ") outside " + std::to_string(m) + "x" + std::to_string(n));
  out(idx.i - 1, idx.j - 1) = 1.0;
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double spectral_norm(const ComplexMatrix& a) { return singular_values(a).front(); }

double trace_norm(const ComplexMatrix& a) {
  const auto s = singular_values(a);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

namespace {

Eigen::MatrixXcd hermitian_part_checked(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::ShapeMismatch, "Hermitian input must be square");
  const Eigen::MatrixXcd m = detail::to_eigen(h);
  const Eigen::MatrixXcd anti = 0.5 * (m - m.adjoint());
  if (anti.norm() > 1e-12 * m.norm())
    throw Error(ErrorCode::NotHermitian,
                "anti-Hermitian part " + std::to_string(anti.norm()) + " exceeds tolerance");
  return 0.5 * (m + m.adjoint());
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian_part_checked(h),
                                                      Eigen::EigenvaluesOnly);
  const auto& w = eig.eigenvalues();
  return {w.data(), w.data() + w.size()};
}

ComplexMatrix psd_project(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian_part_checked(h));
  const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  Eigen::MatrixXcd out = v * clipped.asDiagonal() * v.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return detail::from_eigen(out);
}

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ar = 0; ar < a.rows(); ++ar)
    for (int ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      for (int br = 0; br < b.rows(); ++br)
        for (int bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = size();
  if (n < 1) throw Error(ErrorCode::NotBijective, "empty permutation");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : images_) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
      throw Error(ErrorCode::NotBijective,
                  "value " + std::to_string(v) + " breaks bijection of {1.." + std::to_string(n) + "}");
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> images(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(images.begin(), images.end(), 1);
  return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int k = 1; k <= size(); ++k) inv[static_cast<std::size_t>((*this)(k) - 1)] = k;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const noexcept {
  for (int k = 1; k <= size(); ++k)
    if (images_[static_cast<std::size_t>(k - 1)] != k) return false;
  return true;
}

ComplexMatrix permutation_unitary(const Permutation& perm) {
  const int n = perm.size();
  ComplexMatrix u(n, n);
  for (int k = 1; k <= n; ++k) u(perm(k) - 1, k - 1) = 1.0;
  return u;
}

}  // namespace schur
