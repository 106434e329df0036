#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "schur/linmap.hpp"
#include "schur/matrix.hpp"

namespace schur {

// Finite-grid simulation of the corner-projection argument for weighted
// rearrangements a -> f * a_rho on infinite matrices. Weak* convergence is
// replaced by entrywise convergence at chosen probe positions; nothing here
// is a statement about genuine infinite matrices.

/// Closed-form or stored weight f(i,j), evaluated lazily.
using SymbolGenerator = std::function<Complex(EntryIndex)>;

SymbolGenerator ones_symbol();
/// 1 on {(i,j) : j <= i}, 0 elsewhere.
SymbolGenerator lower_triangular_symbol();
/// Entries of `f`, zero outside its shape.
SymbolGenerator stored_symbol(ComplexMatrix f);

class TruncationScheme {
 public:
  /// `levels` strictly increasing and positive; `rho` a bijection of the
  /// top x top grid, top = levels.back().
  TruncationScheme(std::vector<int> levels, SymbolGenerator symbol, EntryPermutation rho);

  [[nodiscard]] const std::vector<int>& levels() const noexcept { return levels_; }
  [[nodiscard]] int top() const noexcept { return levels_.back(); }
  [[nodiscard]] const EntryPermutation& rho() const noexcept { return rho_; }
  [[nodiscard]] Complex symbol(EntryIndex idx) const { return symbol_(idx); }
  [[nodiscard]] bool has_level(int n) const;

  /// Smallest level n with rho^{-1}(idx) inside the n x n corner.
  [[nodiscard]] int covering_level(EntryIndex idx) const;

 private:
  std::vector<int> levels_;
  SymbolGenerator symbol_;
  EntryPermutation rho_;
};

/// J_n * a: keeps entries with both indices <= n.
ComplexMatrix corner_project(const ComplexMatrix& a, int n);

/// f_n on the top grid: f(i,j) on R_n = rho({1..n} x {1..n}), 0 elsewhere.
ComplexMatrix truncated_image(const TruncationScheme& scheme, int n);

/// T(J_n * a) = f_n * (J_n * a)_rho.
ComplexMatrix truncated_action(const TruncationScheme& scheme, const ComplexMatrix& a, int n);

/// The top-level map a -> f * a_rho as an explicit linear map.
LinearMatrixMap limit_map(const TruncationScheme& scheme);

struct LevelValue {
  int n = 0;
  Complex value;
};

struct ProbeReport {
  EntryIndex probe;
  std::vector<LevelValue> levels;
  Complex limit;
  int covering_level = 0;
  /// First level from which every later value equals the limit (<= 1e-15).
  std::optional<int> stabilized_at;
  /// stabilized_at exists and does not exceed covering_level.
  bool stabilized = false;
};

std::vector<ProbeReport> pointwise_convergence_check(const TruncationScheme& scheme, const ComplexMatrix& a,
                                                     const std::vector<EntryIndex>& probes);

/// Swaps (k,k) with (1,k) for every k on the n x n grid.
EntryPermutation diagonal_row_swap(int n);

struct GrowthSample {
  int n = 0;
  double ratio = 0.0;
};

/// ||I_rho|| / ||I|| under diagonal_row_swap(n), which is sqrt(n).
std::vector<GrowthSample> rearrangement_growth_probe(const std::vector<int>& n_values);

/// Random bijection of the top grid with stored weights |w| in [0.5, 2].
TruncationScheme random_truncation_scheme(std::vector<int> levels, std::uint64_t seed);

}  // namespace schur
