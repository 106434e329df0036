#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "schur/errors.hpp"

namespace schur {

using Complex = std::complex<double>;

/// Position in a matrix grid. Both indices are 1-based; every public API that
/// names an entry by position uses this type. Element access through
/// ComplexMatrix::operator() is 0-based.
struct EntryIndex {
  int i = 1;
  int j = 1;

  auto operator<=>(const EntryIndex&) const = default;
};

/// Dense rectangular complex matrix stored row-major. Shapes are at least 1x1.
class ComplexMatrix {
 public:
  /// Zero matrix.
  ComplexMatrix(int rows, int cols);
  /// Row-major entries; throws ShapeMismatch on a wrong count and NonFinite on
  /// NaN/Inf parts.
  ComplexMatrix(int rows, int cols, std::vector<Complex> entries);

  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix zeros(int rows, int cols) { return ComplexMatrix(rows, cols); }
  static ComplexMatrix ones(int rows, int cols);
  static ComplexMatrix identity(int n);

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }
  [[nodiscard]] int size() const noexcept { return rows_ * cols_; }
  [[nodiscard]] bool same_shape(const ComplexMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Complex& operator()(int r, int c) { return data_[index(r, c)]; }
  const Complex& operator()(int r, int c) const { return data_[index(r, c)]; }

  /// Checked 1-based access.
  [[nodiscard]] Complex at(EntryIndex idx) const;
  [[nodiscard]] bool contains(EntryIndex idx) const noexcept {
    return idx.i >= 1 && idx.i <= rows_ && idx.j >= 1 && idx.j <= cols_;
  }

  [[nodiscard]] std::span<const Complex> entries() const noexcept { return data_; }
  [[nodiscard]] std::span<Complex> entries() noexcept { return data_; }

  [[nodiscard]] ComplexMatrix transpose() const;
  [[nodiscard]] ComplexMatrix adjoint() const;
  [[nodiscard]] ComplexMatrix conj() const;

  [[nodiscard]] double max_abs() const noexcept;
  [[nodiscard]] double frobenius_norm() const noexcept;
  [[nodiscard]] bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  [[nodiscard]] std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_;
  int cols_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);

/// Ordinary matrix product.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest entrywise difference; ShapeMismatch if shapes differ.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Entrywise (Schur/Hadamard) product.
ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// e_{i,j} in M_{m,n}.
ComplexMatrix matrix_unit(int m, int n, EntryIndex idx);

/// Singular values in non-increasing order.
std::vector<double> singular_values(const ComplexMatrix& a);

/// Operator norm (largest singular value).
double spectral_norm(const ComplexMatrix& a);

/// Trace norm (sum of singular values).
double trace_norm(const ComplexMatrix& a);

/// Eigenvalues of the Hermitian part of a square matrix, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// Nearest positive semidefinite matrix in Frobenius norm. The input is
/// symmetrized first; NotHermitian if its anti-Hermitian part exceeds
/// 1e-12 * ||h||_F.
ComplexMatrix psd_project(const ComplexMatrix& h);

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);

/// Bijection of {1..n}, stored by its images.
class Permutation {
 public:
  /// NotBijective unless `images` lists each of 1..n exactly once.
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(images_.size()); }
  /// Image of k (both 1-based).
  [[nodiscard]] int operator()(int k) const { return images_.at(static_cast<std::size_t>(k - 1)); }
  [[nodiscard]] const std::vector<int>& images() const noexcept { return images_; }
  [[nodiscard]] Permutation inverse() const;
  [[nodiscard]] bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// 0/1 unitary u with u e_k = e_{perm(k)}.
ComplexMatrix permutation_unitary(const Permutation& perm);

}  // namespace schur
