#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "schur/matrix.hpp"

namespace schur {

struct GridShape {
  int rows = 1;
  int cols = 1;

  [[nodiscard]] int size() const noexcept { return rows * cols; }
  [[nodiscard]] bool contains(EntryIndex idx) const noexcept {
    return idx.i >= 1 && idx.i <= rows && idx.j >= 1 && idx.j <= cols;
  }
  /// Row-major position of idx, 0-based.
  [[nodiscard]] int linear(EntryIndex idx) const noexcept { return (idx.i - 1) * cols + (idx.j - 1); }
  [[nodiscard]] EntryIndex entry(int linear_index) const noexcept {
    return {linear_index / cols + 1, linear_index % cols + 1};
  }

  auto operator<=>(const GridShape&) const = default;
};

inline GridShape shape_of(const ComplexMatrix& a) { return {a.rows(), a.cols()}; }

/// Partial injection from a source index grid into a destination grid.
/// Unmapped source indices model the kernel of a map.
class EntryPermutation {
 public:
  /// `mapping` is indexed by source position in row-major order. Throws
  /// IndexOutOfRange for targets outside `dst` and NotBijective when two
  /// sources share a target.
  EntryPermutation(GridShape src, GridShape dst, std::vector<std::optional<EntryIndex>> mapping);

  static EntryPermutation identity(GridShape shape);
  /// (i,j) -> (j,i) on an n x n grid.
  static EntryPermutation transpose(int n);
  static EntryPermutation from_function(GridShape src, GridShape dst,
                                        const std::function<std::optional<EntryIndex>(EntryIndex)>& rho);

  [[nodiscard]] GridShape src_shape() const noexcept { return src_; }
  [[nodiscard]] GridShape dst_shape() const noexcept { return dst_; }
  [[nodiscard]] const std::vector<std::optional<EntryIndex>>& mapping() const noexcept { return forward_; }

  [[nodiscard]] std::optional<EntryIndex> image(EntryIndex src) const;
  [[nodiscard]] std::optional<EntryIndex> preimage(EntryIndex dst) const;

  [[nodiscard]] bool is_total() const noexcept;
  /// Total and onto, which forces src and dst to have the same size.
  [[nodiscard]] bool is_bijection() const noexcept;
  [[nodiscard]] std::vector<EntryIndex> unused_destinations() const;
  [[nodiscard]] EntryPermutation inverse() const;

  friend bool operator==(const EntryPermutation& a, const EntryPermutation& b) {
    return a.src_ == b.src_ && a.dst_ == b.dst_ && a.forward_ == b.forward_;
  }

 private:
  GridShape src_;
  GridShape dst_;
  std::vector<std::optional<EntryIndex>> forward_;
  std::vector<std::optional<EntryIndex>> backward_;
};

/// a_rho: the destination-shaped matrix with a_rho(rho(x)) = a(x) and zeros
/// off the range of rho.
ComplexMatrix permute_entries(const ComplexMatrix& a, const EntryPermutation& rho);

/// Linear map between matrix spaces, stored by the images of the source
/// matrix units in row-major (i,j) order.
class LinearMatrixMap {
 public:
  LinearMatrixMap(GridShape src, GridShape dst, std::vector<ComplexMatrix> images);

  /// Tabulates an arbitrary linear action on the matrix units of `src`.
  static LinearMatrixMap from_action(GridShape src, GridShape dst,
                                     const std::function<ComplexMatrix(const ComplexMatrix&)>& action);
  static LinearMatrixMap identity(GridShape shape);
  static LinearMatrixMap transpose(int n);

  [[nodiscard]] GridShape src_shape() const noexcept { return src_; }
  [[nodiscard]] GridShape dst_shape() const noexcept { return dst_; }
  [[nodiscard]] const std::vector<ComplexMatrix>& images() const noexcept { return images_; }
  [[nodiscard]] const ComplexMatrix& image(EntryIndex src) const;

  /// T(a) = sum a(i,j) T(e_{i,j}).
  [[nodiscard]] ComplexMatrix apply(const ComplexMatrix& a) const;

  /// Rank of T as a linear map (numerical, relative threshold 1e-10).
  [[nodiscard]] int rank() const;

  friend bool operator==(const LinearMatrixMap&, const LinearMatrixMap&) = default;

 private:
  GridShape src_;
  GridShape dst_;
  std::vector<ComplexMatrix> images_;
};

/// T(a) = f * a_rho; T(e_{i,j}) = f(rho(i,j)) e_{rho(i,j)}, and 0 when (i,j)
/// is unmapped.
LinearMatrixMap from_weighted_permutation(const ComplexMatrix& f, const EntryPermutation& rho);

/// T(a) = u a v, or u a^t v when `transposed`, with u and v the permutation
/// unitaries of pi (rows) and sigma (columns). `transposed` needs a square
/// shape.
LinearMatrixMap from_conjugation(const Permutation& pi, const Permutation& sigma, bool transposed);

/// Lower bound for ||T||_op with respect to spectral norms. Samples every
/// matrix unit, every two-unit sum e_{a,b} + e_{c,d} with a != c and b != d
/// (only for sources of at most 144 entries), and `trials` normalized
/// Gaussian inputs drawn from stream (seed, trial).
double operator_norm_lower_bound(const LinearMatrixMap& map, int trials, std::uint64_t seed);

enum class MapKind { WeightedPermutation, Conjugation, Dense };

/// Reproducible random member of a map family on `shape` (src = dst).
/// Weighted permutations draw |w| in [0.5, 2]; each unit is sent to the
/// kernel with probability `kernel_fraction`. Conjugations pick the transpose
/// flag at random on square shapes.
LinearMatrixMap random_map(MapKind kind, GridShape shape, std::uint64_t seed,
                           double kernel_fraction = 0.0);

}  // namespace schur
