#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "schur/linmap.hpp"
#include "schur/matrix.hpp"

namespace schur {

/// An entry of an image counts as zero when |z| <= kZeroTolerance * (1 + max|image|).
inline constexpr double kZeroTolerance = 1e-12;

/// Certificate that a map is not contractive: a unit-norm input whose image
/// has norm `ratio`.
struct Witness {
  ComplexMatrix input;
  double ratio = 0.0;
  /// The two matrix units summed to form `input`.
  EntryIndex first;
  EntryIndex second;
};

/// T(a) = f * a_rho. Kernel units are left unmapped in rho.
struct WeightedPermutationForm {
  ComplexMatrix f;
  EntryPermutation rho;
  bool surjective = false;
};

/// T(a) = u a v, or u a^t v when `transposed`, with u, v the permutation
/// unitaries of pi and sigma. For the transposed case (pi, sigma) act on the
/// coordinates of a^t, so from_conjugation(pi, sigma, true) reproduces T.
struct ConjugationForm {
  Permutation pi;
  Permutation sigma;
  bool transposed = false;
};

struct NotCanonicalForm {
  Witness witness;
};

using CanonicalForm = std::variant<WeightedPermutationForm, ConjugationForm, NotCanonicalForm>;

/// True iff the images of distinct matrix units have disjoint supports,
/// which by bilinearity is the same as Ta * Tb = 0 whenever a * b = 0.
bool is_schur_null_preserving(const LinearMatrixMap& map);

/// True iff every unit image is a 0/1 idempotent for * and distinct unit
/// images have disjoint supports.
bool is_schur_multiplicative(const LinearMatrixMap& map);

/// Reads off rho and the weights from a null-preserving map whose nonzero
/// unit images are monomials. f is zero off the range of rho.
/// Throws NotNullPreserving or ImageNotMonomial.
WeightedPermutationForm recover_weighted_permutation(const LinearMatrixMap& map);

/// Factors the entry permutation of a bijective Schur multiplicative map as
/// rows-by-columns (or, on square grids, with a transpose). When no factoring
/// exists the result carries the lexicographically first pair of units with
/// distinct rows and columns whose images share a row or a column.
/// Throws NotMultiplicative, NotBijective, or ShapeMismatch (src != dst).
CanonicalForm classify_contraction(const LinearMatrixMap& map);

/// Rebuilds the map a canonical form describes; nullopt for NotCanonical.
std::optional<LinearMatrixMap> reconstruct(const CanonicalForm& form);

/// max | ||Ta|| - ||a|| | over `trials` unit-norm Gaussian samples.
double verify_isometry(const LinearMatrixMap& map, int trials, std::uint64_t seed);

/// ||(T (x) id_k)(W)|| / ||W|| for W = sum_{i,j<=k} e_{i,j} (x) e_{j,i}.
/// T must act on M_n with k <= n (DimensionTooSmall otherwise).
double amplification_lower_bound(const LinearMatrixMap& map, int k);

/// Map M_{n+1} -> M_n that deletes row 2 and column 2: output(k,l) =
/// a(s(k), s(l)) with s(1) = 1 and s(k) = k + 1 otherwise. Surjective,
/// contractive and Schur multiplicative, but not injective.
LinearMatrixMap row_column_deletion_map(int n);

struct AnalysisReport {
  bool null_preserving = false;
  bool multiplicative = false;
  bool injective = false;
  bool surjective = false;
  int rank = 0;
  int kernel_dimension = 0;
  std::optional<CanonicalForm> canonical_form;
  /// Why no canonical form was produced, when it wasn't.
  std::string canonical_note;
  double isometry_max_deviation = 0.0;
  double operator_norm_lower_bound = 0.0;
};

AnalysisReport analyze_map(const LinearMatrixMap& map, int trials, std::uint64_t seed);

}  // namespace schur
