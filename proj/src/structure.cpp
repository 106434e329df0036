#include "schur/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schur/random.hpp"

namespace schur {

namespace {

double zero_threshold(const ComplexMatrix& img) { return kZeroTolerance * (1.0 + img.max_abs()); }

/// For each destination cell, the index of the unique unit image that is
/// nonzero there; -1 for none. nullopt as soon as two images overlap.
std::optional<std::vector<int>> support_owners(const LinearMatrixMap& map) {
  std::vector<int> owner(static_cast<std::size_t>(map.dst_shape().size()), -1);
  const auto& images = map.images();
  for (std::size_t k = 0; k < images.size(); ++k) {
    const double eps = zero_threshold(images[k]);
    const auto entries = images[k].entries();
    for (std::size_t t = 0; t < entries.size(); ++t) {
      if (std::abs(entries[t]) <= eps) continue;
      if (owner[t] != -1) return std::nullopt;
      owner[t] = static_cast<int>(k);
    }
  }
  return owner;
}

/// The entry permutation of a Schur multiplicative bijection, or NotBijective.
EntryPermutation multiplicative_rho(const LinearMatrixMap& map) {
  if (!is_schur_multiplicative(map))
    throw Error(ErrorCode::NotMultiplicative, "map is not Schur multiplicative");
  if (map.src_shape() != map.dst_shape())
    throw Error(ErrorCode::ShapeMismatch, "classification needs equal source and destination shapes");
  try {
    auto form = recover_weighted_permutation(map);
    if (!form.rho.is_bijection())
      throw Error(ErrorCode::NotBijective, "Schur multiplicative map has a nontrivial kernel");
    return std::move(form.rho);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ImageNotMonomial)
      throw Error(ErrorCode::NotBijective, "Schur multiplicative map is not bijective");
    throw;
  }
}

std::optional<ConjugationForm> factor_rows_columns(const EntryPermutation& rho) {
  const GridShape s = rho.src_shape();
  std::vector<int> row(static_cast<std::size_t>(s.rows)), col(static_cast<std::size_t>(s.cols));
  for (int i = 1; i <= s.rows; ++i) row[static_cast<std::size_t>(i - 1)] = rho.image({i, 1})->i;
  for (int j = 1; j <= s.cols; ++j) col[static_cast<std::size_t>(j - 1)] = rho.image({1, j})->j;
  for (int i = 1; i <= s.rows; ++i)
    for (int j = 1; j <= s.cols; ++j)
      if (*rho.image({i, j}) != EntryIndex{row[static_cast<std::size_t>(i - 1)], col[static_cast<std::size_t>(j - 1)]})
        return std::nullopt;
  // u e_i = e_{pi(i)} moves row i to pi(i); right multiplication by the
  // unitary of sigma moves column j to sigma^{-1}(j).
  return ConjugationForm{Permutation(std::move(row)), Permutation(std::move(col)).inverse(), false};
}

std::optional<ConjugationForm> factor_transposed(const EntryPermutation& rho) {
  const GridShape s = rho.src_shape();
  if (s.rows != s.cols) return std::nullopt;
  const int n = s.rows;
  std::vector<int> row(static_cast<std::size_t>(n)), col(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) row[static_cast<std::size_t>(j - 1)] = rho.image({1, j})->i;
  for (int i = 1; i <= n; ++i) col[static_cast<std::size_t>(i - 1)] = rho.image({i, 1})->j;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (*rho.image({i, j}) != EntryIndex{row[static_cast<std::size_t>(j - 1)], col[static_cast<std::size_t>(i - 1)]})
        return std::nullopt;
  return ConjugationForm{Permutation(std::move(row)), Permutation(std::move(col)).inverse(), true};
}

Witness pigeonhole_witness(const LinearMatrixMap& map, const EntryPermutation& rho) {
  const GridShape s = rho.src_shape();
  for (int p = 0; p < s.size(); ++p) {
    const EntryIndex x = s.entry(p);
    const EntryIndex tx = *rho.image(x);
    for (int q = p + 1; q < s.size(); ++q) {
      const EntryIndex y = s.entry(q);
      if (x.i == y.i || x.j == y.j) continue;
      const EntryIndex ty = *rho.image(y);
      if (tx.i != ty.i && tx.j != ty.j) continue;
      ComplexMatrix input = matrix_unit(s.rows, s.cols, x) + matrix_unit(s.rows, s.cols, y);
      const double ratio = spectral_norm(map.apply(input)) / spectral_norm(input);
      return Witness{std::move(input), ratio, x, y};
    }
  }
  // A bijection keeping every such pair apart preserves the rook graph and
  // therefore factors, so the callers never get here.
  throw Error(ErrorCode::InvalidArgument, "no pigeonhole witness exists for a factorable permutation");
}

}  // namespace

bool is_schur_null_preserving(const LinearMatrixMap& map) { return support_owners(map).has_value(); }

bool is_schur_multiplicative(const LinearMatrixMap& map) {
  for (const auto& img : map.images()) {
    const double scale = 1.0 + img.max_abs();
    const double eps = kZeroTolerance * scale * scale;
    for (const Complex& z : img.entries())
      if (std::abs(z * z - z) > eps) return false;
  }
  return is_schur_null_preserving(map);
}

WeightedPermutationForm recover_weighted_permutation(const LinearMatrixMap& map) {
  if (!is_schur_null_preserving(map))
    throw Error(ErrorCode::NotNullPreserving, "images of distinct matrix units overlap");
  const GridShape src = map.src_shape();
  const GridShape dst = map.dst_shape();
  ComplexMatrix f(dst.rows, dst.cols);
  std::vector<std::optional<EntryIndex>> mapping(static_cast<std::size_t>(src.size()));
  for (int k = 0; k < src.size(); ++k) {
    const ComplexMatrix& img = map.images()[static_cast<std::size_t>(k)];
    const double eps = zero_threshold(img);
    const auto entries = img.entries();
    for (int t = 0; t < dst.size(); ++t) {
      const Complex z = entries[static_cast<std::size_t>(t)];
      if (std::abs(z) <= eps) continue;
      auto& slot = mapping[static_cast<std::size_t>(k)];
      if (slot) {
        const EntryIndex x = src.entry(k);
        throw Error(ErrorCode::ImageNotMonomial, "image of e_{" + std::to_string(x.i) + "," +
                                                     std::to_string(x.j) + "} has several nonzero entries");
      }
      slot = dst.entry(t);
      f(slot->i - 1, slot->j - 1) = z;
    }
  }
  EntryPermutation rho(src, dst, std::move(mapping));
  const bool surjective = rho.is_bijection();
  return WeightedPermutationForm{std::move(f), std::move(rho), surjective};
}

CanonicalForm classify_contraction(const LinearMatrixMap& map) {
  const EntryPermutation rho = multiplicative_rho(map);
  if (auto form = factor_rows_columns(rho)) return *form;
  if (auto form = factor_transposed(rho)) return *form;
  return NotCanonicalForm{pigeonhole_witness(map, rho)};
}

std::optional<LinearMatrixMap> reconstruct(const CanonicalForm& form) {
  if (const auto* w = std::get_if<WeightedPermutationForm>(&form)) return from_weighted_permutation(w->f, w->rho);
  if (const auto* c = std::get_if<ConjugationForm>(&form)) return from_conjugation(c->pi, c->sigma, c->transposed);
  return std::nullopt;
}

double verify_isometry(const LinearMatrixMap& map, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  const GridShape src = map.src_shape();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
    const ComplexMatrix a = random_gaussian(src.rows, src.cols, rng);
    const double norm = spectral_norm(a);
    worst = std::max(worst, std::abs(spectral_norm(map.apply(a)) - norm) / norm);
  }
  return worst;
}

double amplification_lower_bound(const LinearMatrixMap& map, int k) {
  const GridShape s = map.src_shape();
  if (s != map.dst_shape() || s.rows != s.cols)
    throw Error(ErrorCode::ShapeMismatch, "amplification probe needs a map on square matrices");
  if (k < 1 || k > s.rows)
    throw Error(ErrorCode::DimensionTooSmall,
                "swap witness of order " + std::to_string(k) + " does not fit in M_" + std::to_string(s.rows));
  const int n = s.rows;
  ComplexMatrix witness(n * k, n * k);
  ComplexMatrix amplified(n * k, n * k);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      const ComplexMatrix inner = matrix_unit(k, k, {j, i});
      witness += kronecker(matrix_unit(n, n, {i, j}), inner);
      amplified += kronecker(map.image({i, j}), inner);
    }
  return spectral_norm(amplified) / spectral_norm(witness);
}

LinearMatrixMap row_column_deletion_map(int n) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "deletion map needs n >= 2");
  const GridShape src{n + 1, n + 1};
  const GridShape dst{n, n};
  // s(1) = 1, s(k) = k + 1; its inverse sends index 2 nowhere.
  auto shrink = [](int idx) { return idx == 1 ? 1 : idx - 1; };
  std::vector<ComplexMatrix> images;
  for (int k = 0; k < src.size(); ++k) {
    const EntryIndex x = src.entry(k);
    if (x.i == 2 || x.j == 2)
      images.emplace_back(n, n);
    else
      images.push_back(matrix_unit(n, n, {shrink(x.i), shrink(x.j)}));
  }
  return LinearMatrixMap(src, dst, std::move(images));
}

AnalysisReport analyze_map(const LinearMatrixMap& map, int trials, std::uint64_t seed) {
  AnalysisReport report;
  report.null_preserving = is_schur_null_preserving(map);
  report.multiplicative = report.null_preserving && is_schur_multiplicative(map);
  report.rank = map.rank();
  report.kernel_dimension = map.src_shape().size() - report.rank;
  report.injective = report.kernel_dimension == 0;
  report.surjective = report.rank == map.dst_shape().size();
  report.isometry_max_deviation = verify_isometry(map, trials, seed);
  report.operator_norm_lower_bound = operator_norm_lower_bound(map, trials, seed);

  if (report.multiplicative && report.injective && report.surjective &&
      map.src_shape() == map.dst_shape()) {
    report.canonical_form = classify_contraction(map);
  } else if (report.null_preserving) {
    try {
      report.canonical_form = recover_weighted_permutation(map);
    } catch (const Error& e) {
      report.canonical_note = e.what();
    }
  } else {
    report.canonical_note = "map is not Schur null preserving";
  }
  return report;
}

}  // namespace schur
