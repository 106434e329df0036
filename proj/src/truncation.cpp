#include "schur/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schur/random.hpp"

namespace schur {

SymbolGenerator ones_symbol() {
  return [](EntryIndex) { return Complex{1.0, 0.0}; };
}

SymbolGenerator lower_triangular_symbol() {
  return [](EntryIndex idx) { return idx.j <= idx.i ? Complex{1.0, 0.0} : Complex{}; };
}

SymbolGenerator stored_symbol(ComplexMatrix f) {
  return [f = std::move(f)](EntryIndex idx) { return f.contains(idx) ? f.at(idx) : Complex{}; };
}

TruncationScheme::TruncationScheme(std::vector<int> levels, SymbolGenerator symbol, EntryPermutation rho)
    : levels_(std::move(levels)), symbol_(std::move(symbol)), rho_(std::move(rho)) {
  if (levels_.empty()) throw Error(ErrorCode::InvalidArgument, "a scheme needs at least one level");
  if (levels_.front() < 1) throw Error(ErrorCode::InvalidArgument, "levels must be positive");
  if (std::adjacent_find(levels_.begin(), levels_.end(), std::greater_equal<>()) != levels_.end())
    throw Error(ErrorCode::InvalidArgument, "levels must be strictly increasing");
  const GridShape grid{top(), top()};
  if (rho_.src_shape() != grid || rho_.dst_shape() != grid || !rho_.is_bijection())
    throw Error(ErrorCode::NotBijective, "rho must be a bijection of the " + std::to_string(top()) + "x" +
                                             std::to_string(top()) + " grid");
  if (!symbol_) throw Error(ErrorCode::InvalidArgument, "missing symbol generator");
}

bool TruncationScheme::has_level(int n) const {
  return std::binary_search(levels_.begin(), levels_.end(), n);
}

int TruncationScheme::covering_level(EntryIndex idx) const {
  const EntryIndex pre = *rho_.preimage(idx);
  const int need = std::max(pre.i, pre.j);
  return *std::lower_bound(levels_.begin(), levels_.end(), need);
}

ComplexMatrix corner_project(const ComplexMatrix& a, int n) {
  if (n < 1 || n > a.rows() || n > a.cols())
    throw Error(ErrorCode::IndexOutOfRange, "corner " + std::to_string(n) + " outside " +
                                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  ComplexMatrix out(a.rows(), a.cols());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = a(r, c);
  return out;
}

namespace {

void require_level(const TruncationScheme& scheme, int n) {
  if (!scheme.has_level(n))
    throw Error(ErrorCode::InvalidArgument, "level " + std::to_string(n) + " is not part of the scheme");
}

}  // namespace

ComplexMatrix truncated_image(const TruncationScheme& scheme, int n) {
  require_level(scheme, n);
  const int top = scheme.top();
  ComplexMatrix out(top, top);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const EntryIndex target = *scheme.rho().image({i, j});
      out(target.i - 1, target.j - 1) = scheme.symbol(target);
    }
  return out;
}

ComplexMatrix truncated_action(const TruncationScheme& scheme, const ComplexMatrix& a, int n) {
  require_level(scheme, n);
  if (a.rows() != scheme.top() || a.cols() != scheme.top())
    throw Error(ErrorCode::ShapeMismatch, "input must live on the top grid");
  return schur_product(truncated_image(scheme, n), permute_entries(corner_project(a, n), scheme.rho()));
}

LinearMatrixMap limit_map(const TruncationScheme& scheme) {
  return from_weighted_permutation(truncated_image(scheme, scheme.top()), scheme.rho());
}

std::vector<ProbeReport> pointwise_convergence_check(const TruncationScheme& scheme, const ComplexMatrix& a,
                                                     const std::vector<EntryIndex>& probes) {
  const int top = scheme.top();
  if (a.rows() != top || a.cols() != top) throw Error(ErrorCode::ShapeMismatch, "input must live on the top grid");
  for (const auto& probe : probes)
    if (!a.contains(probe)) throw Error(ErrorCode::IndexOutOfRange, "probe outside the top grid");

  const ComplexMatrix limit = schur_product(truncated_image(scheme, top), permute_entries(a, scheme.rho()));
  std::vector<ComplexMatrix> per_level;
  per_level.reserve(scheme.levels().size());
  for (int n : scheme.levels()) per_level.push_back(truncated_action(scheme, a, n));

  std::vector<ProbeReport> reports;
  for (const auto& probe : probes) {
    ProbeReport report;
    report.probe = probe;
    report.limit = limit.at(probe);
    report.covering_level = scheme.covering_level(probe);
    for (std::size_t k = 0; k < per_level.size(); ++k)
      report.levels.push_back({scheme.levels()[k], per_level[k].at(probe)});
    for (auto it = report.levels.rbegin(); it != report.levels.rend(); ++it) {
      if (std::abs(it->value - report.limit) > 1e-15) break;
      report.stabilized_at = it->n;
    }
    report.stabilized = report.stabilized_at && *report.stabilized_at <= report.covering_level;
    reports.push_back(std::move(report));
  }
  return reports;
}

EntryPermutation diagonal_row_swap(int n) {
  return EntryPermutation::from_function({n, n}, {n, n}, [](EntryIndex x) {
    if (x.i == x.j) return std::optional<EntryIndex>(EntryIndex{1, x.j});
    if (x.i == 1) return std::optional<EntryIndex>(EntryIndex{x.j, x.j});
    return std::optional<EntryIndex>(x);
  });
}

std::vector<GrowthSample> rearrangement_growth_probe(const std::vector<int>& n_values) {
  if (std::adjacent_find(n_values.begin(), n_values.end(), std::greater_equal<>()) != n_values.end())
    throw Error(ErrorCode::InvalidArgument, "n values must be strictly increasing");
  std::vector<GrowthSample> out;
  for (int n : n_values) {
    const ComplexMatrix a = ComplexMatrix::identity(n);
    const ComplexMatrix moved = permute_entries(a, diagonal_row_swap(n));
    out.push_back({n, spectral_norm(moved) / spectral_norm(a)});
  }
  return out;
}

TruncationScheme random_truncation_scheme(std::vector<int> levels, std::uint64_t seed) {
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "a scheme needs at least one level");
  const int top = levels.back();
  const GridShape grid{top, top};
  Rng rng = make_rng(seed);
  const Permutation cells = random_permutation(grid.size(), rng);
  std::vector<std::optional<EntryIndex>> mapping;
  for (int k = 0; k < grid.size(); ++k) mapping.emplace_back(grid.entry(cells(k + 1) - 1));
  ComplexMatrix f(top, top);
  for (auto& z : f.entries()) z = random_weight(rng);
  return TruncationScheme(std::move(levels), stored_symbol(std::move(f)), EntryPermutation(grid, grid, std::move(mapping)));
}

}  // namespace schur
