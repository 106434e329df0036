#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "schur/linmap.hpp"
#include "schur/random.hpp"
#include "schur/structure.hpp"

using namespace schur;

namespace {

void expect_error(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(EntryPermutation, ValidatesTargets) {
  expect_error(ErrorCode::IndexOutOfRange, [] {
    EntryPermutation({1, 2}, {1, 2}, {EntryIndex{1, 1}, EntryIndex{1, 3}});
  });
  expect_error(ErrorCode::NotBijective, [] {
    EntryPermutation({1, 2}, {1, 2}, {EntryIndex{1, 1}, EntryIndex{1, 1}});
  });
  expect_error(ErrorCode::ShapeMismatch, [] { EntryPermutation({1, 2}, {1, 2}, {EntryIndex{1, 1}}); });
}

TEST(EntryPermutation, PartialMapsAndInverse) {
  const EntryPermutation rho({1, 3}, {2, 2}, {EntryIndex{2, 2}, std::nullopt, EntryIndex{1, 1}});
  EXPECT_FALSE(rho.is_total());
  EXPECT_FALSE(rho.is_bijection());
  EXPECT_EQ(rho.image({1, 1}), (EntryIndex{2, 2}));
  EXPECT_FALSE(rho.image({1, 2}).has_value());
  EXPECT_EQ(rho.preimage({1, 1}), (EntryIndex{1, 3}));
  const auto unused = rho.unused_destinations();
  ASSERT_EQ(unused.size(), 2u);
  EXPECT_EQ(unused[0], (EntryIndex{1, 2}));
  EXPECT_EQ(unused[1], (EntryIndex{2, 1}));

  const EntryPermutation t = EntryPermutation::transpose(3);
  EXPECT_TRUE(t.is_bijection());
  EXPECT_EQ(t.inverse(), t);
}

TEST(PermuteEntries, MovesValuesToTheirTargets) {
  const ComplexMatrix a = ComplexMatrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(permute_entries(a, EntryPermutation::transpose(2)), a.transpose());
  EXPECT_EQ(permute_entries(a, EntryPermutation::identity({2, 2})), a);
}

TEST(LinearMatrixMap, ValidatesImages) {
  expect_error(ErrorCode::ShapeMismatch, [] { LinearMatrixMap({1, 2}, {1, 1}, {ComplexMatrix(1, 1)}); });
  expect_error(ErrorCode::ShapeMismatch,
               [] { LinearMatrixMap({1, 2}, {1, 1}, {ComplexMatrix(1, 1), ComplexMatrix(2, 1)}); });
  const LinearMatrixMap id = LinearMatrixMap::identity({2, 2});
  expect_error(ErrorCode::ShapeMismatch, [&] { (void)id.apply(ComplexMatrix(2, 3)); });
}

TEST(LinearMatrixMap, ApplyExamples) {
  Rng rng = make_rng(31);
  const ComplexMatrix a = random_gaussian(3, 2, rng);
  EXPECT_EQ(LinearMatrixMap::identity({3, 2}).apply(a), a);
  const LinearMatrixMap t = LinearMatrixMap::transpose(3);
  EXPECT_EQ(t.apply(matrix_unit(3, 3, {1, 2})), t.image({1, 2}));
  EXPECT_EQ(row_column_deletion_map(2).apply(matrix_unit(3, 3, {2, 2})), ComplexMatrix(2, 2));
}

TEST(LinearMatrixMap, ApplyIsLinearAndMatchesUnitExpansion) {
  for (int seed = 0; seed < 10; ++seed) {
    const LinearMatrixMap map = random_map(MapKind::Dense, {2, 3}, seed);
    Rng rng = make_rng(100 + seed);
    const ComplexMatrix a = random_gaussian(2, 3, rng);
    const ComplexMatrix b = random_gaussian(2, 3, rng);
    const Complex alpha(1.5, -0.5);
    const Complex beta(-0.25, 2.0);
    EXPECT_LE(max_abs_diff(map.apply(alpha * a + beta * b), alpha * map.apply(a) + beta * map.apply(b)), 1e-12);
    EXPECT_LE(max_abs_diff(map.apply(a), oracle::apply(map, a)), 1e-12);
  }
}

TEST(FromWeightedPermutation, Examples) {
  EXPECT_EQ(from_weighted_permutation(ComplexMatrix::ones(2, 3), EntryPermutation::identity({2, 3})),
            LinearMatrixMap::identity({2, 3}));
  EXPECT_EQ(from_weighted_permutation(ComplexMatrix::ones(3, 3), EntryPermutation::transpose(3)),
            LinearMatrixMap::transpose(3));

  ComplexMatrix f = ComplexMatrix::ones(2, 2);
  const EntryPermutation swap({2, 2}, {2, 2}, {EntryIndex{2, 2}, EntryIndex{1, 2}, EntryIndex{2, 1}, EntryIndex{1, 1}});
  f(1, 1) = 0.0;
  const LinearMatrixMap killed = from_weighted_permutation(f, swap);
  EXPECT_EQ(killed.image({1, 1}), ComplexMatrix(2, 2));
  EXPECT_EQ(killed.rank(), 3);

  expect_error(ErrorCode::ShapeMismatch,
               [] { (void)from_weighted_permutation(ComplexMatrix::ones(2, 2), EntryPermutation::identity({2, 3})); });
}

TEST(FromWeightedPermutation, AgreesWithDirectFormula) {
  Rng rng = make_rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 4;
    const int n = 1 + (trial / 4) % 4;
    const GridShape grid{m, n};
    const Permutation cells = random_permutation(grid.size(), rng);
    std::vector<std::optional<EntryIndex>> mapping;
    for (int k = 0; k < grid.size(); ++k) mapping.emplace_back(grid.entry(cells(k + 1) - 1));
    const EntryPermutation rho(grid, grid, mapping);
    ComplexMatrix f(m, n);
    for (auto& z : f.entries()) z = random_weight(rng);
    const ComplexMatrix a = random_gaussian(m, n, rng);

    ComplexMatrix direct(m, n);
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= n; ++j) {
        const EntryIndex t = *rho.image({i, j});
        direct(t.i - 1, t.j - 1) = f(t.i - 1, t.j - 1) * a(i - 1, j - 1);
      }
    EXPECT_LE(max_abs_diff(from_weighted_permutation(f, rho).apply(a), direct), 1e-14);
  }
}

TEST(FromConjugation, Examples) {
  EXPECT_EQ(from_conjugation(Permutation::identity(3), Permutation::identity(2), false),
            LinearMatrixMap::identity({3, 2}));
  EXPECT_EQ(from_conjugation(Permutation::identity(3), Permutation::identity(3), true), LinearMatrixMap::transpose(3));
  const ComplexMatrix a = ComplexMatrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(from_conjugation(Permutation({2, 1}), Permutation::identity(2), false).apply(a),
            ComplexMatrix::from_rows({{3, 4}, {1, 2}}));
  expect_error(ErrorCode::ShapeMismatch,
               [] { (void)from_conjugation(Permutation::identity(2), Permutation::identity(3), true); });
}

TEST(FromConjugation, IsIsometric) {
  Rng rng = make_rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 5;
    const int n = 1 + (trial / 2) % 5;
    const bool transposed = m == n && trial % 2 == 0;
    const LinearMatrixMap map = from_conjugation(random_permutation(m, rng), random_permutation(n, rng), transposed);
    for (int k = 0; k < 5; ++k) {
      const ComplexMatrix a = random_gaussian(m, n, rng);
      EXPECT_NEAR(spectral_norm(map.apply(a)), spectral_norm(a), 1e-10 * spectral_norm(a));
    }
    EXPECT_NEAR(operator_norm_lower_bound(map, 20, trial), 1.0, 1e-10);
  }
}

TEST(OperatorNormLowerBound, Examples) {
  const LinearMatrixMap id = LinearMatrixMap::identity({3, 3});
  EXPECT_NEAR(operator_norm_lower_bound(id, 10, 0), 1.0, 1e-12);
  const LinearMatrixMap twice = LinearMatrixMap::from_action({3, 3}, {3, 3}, [](const ComplexMatrix& a) {
    return 2.0 * a;
  });
  EXPECT_NEAR(operator_norm_lower_bound(twice, 10, 0), 2.0, 1e-12);

  // e_{1,1} -> e_{2,2} and e_{2,2} -> e_{1,1}; e_{1,1} + e_{2,3} lands in row 2 twice.
  const EntryPermutation rho = EntryPermutation::from_function({3, 3}, {3, 3}, [](EntryIndex x) {
    if (x == EntryIndex{1, 1}) return std::optional<EntryIndex>(EntryIndex{2, 2});
    if (x == EntryIndex{2, 2}) return std::optional<EntryIndex>(EntryIndex{1, 1});
    return std::optional<EntryIndex>(x);
  });
  const LinearMatrixMap swapped = from_weighted_permutation(ComplexMatrix::ones(3, 3), rho);
  EXPECT_GE(operator_norm_lower_bound(swapped, 1, 0), std::sqrt(2.0) - 1e-12);
  EXPECT_EQ(operator_norm_lower_bound(swapped, 5, 9), operator_norm_lower_bound(swapped, 5, 9));
}

TEST(RandomMap, FamiliesBehaveAsAdvertised) {
  const LinearMatrixMap wp = random_map(MapKind::WeightedPermutation, {2, 2}, 1);
  const WeightedPermutationForm form = recover_weighted_permutation(wp);
  EXPECT_EQ(from_weighted_permutation(form.f, form.rho), wp);

  EXPECT_TRUE(std::holds_alternative<ConjugationForm>(
      classify_contraction(random_map(MapKind::Conjugation, {3, 3}, 7))));

  EXPECT_FALSE(is_schur_null_preserving(random_map(MapKind::Dense, {2, 2}, 3)));
  EXPECT_EQ(random_map(MapKind::Dense, {2, 2}, 3), random_map(MapKind::Dense, {2, 2}, 3));

  const LinearMatrixMap sparse = random_map(MapKind::WeightedPermutation, {4, 4}, 2, 0.5);
  EXPECT_TRUE(is_schur_null_preserving(sparse));
  EXPECT_LT(sparse.rank(), 16);
}
