#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "schur/random.hpp"
#include "schur/structure.hpp"
#include "schur/truncation.hpp"

using namespace schur;

namespace {

/// f_n by enumerating the n x n corner and searching rho for each image.
ComplexMatrix enumerated_image(const TruncationScheme& scheme, int n) {
  const int top = scheme.top();
  ComplexMatrix out(top, top);
  for (int r = 1; r <= top; ++r)
    for (int c = 1; c <= top; ++c)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          if (scheme.rho().image({i, j}) == EntryIndex{r, c}) out(r - 1, c - 1) = scheme.symbol({r, c});
  return out;
}

EntryPermutation shift_permutation(int n, int by) {
  const GridShape grid{n, n};
  return EntryPermutation::from_function(grid, grid, [&](EntryIndex x) {
    return std::optional<EntryIndex>(grid.entry((grid.linear(x) + by) % grid.size()));
  });
}

}  // namespace

TEST(CornerProject, Examples) {
  Rng rng = make_rng(1);
  const ComplexMatrix a = random_gaussian(4, 4, rng);
  EXPECT_EQ(corner_project(a, 4), a);
  const ComplexMatrix one = corner_project(a, 1);
  EXPECT_EQ(one(0, 0), a(0, 0));
  EXPECT_EQ(one.frobenius_norm(), std::abs(a(0, 0)));
  ComplexMatrix corner(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) corner(r, c) = 1.0;
  EXPECT_EQ(corner_project(a, 2), schur_product(corner, a));
  EXPECT_THROW((void)corner_project(a, 5), Error);
  EXPECT_THROW((void)corner_project(a, 0), Error);
}

TEST(CornerProject, ComposesAsMinimum) {
  Rng rng = make_rng(2);
  const ComplexMatrix a = random_gaussian(5, 5, rng);
  for (int n = 1; n <= 5; ++n)
    for (int m = 1; m <= 5; ++m)
      EXPECT_EQ(corner_project(corner_project(a, n), m), corner_project(a, std::min(n, m)));
}

TEST(TruncationScheme, Validation) {
  EXPECT_THROW(TruncationScheme({}, ones_symbol(), EntryPermutation::identity({1, 1})), Error);
  EXPECT_THROW(TruncationScheme({2, 2}, ones_symbol(), EntryPermutation::identity({2, 2})), Error);
  EXPECT_THROW(TruncationScheme({0, 2}, ones_symbol(), EntryPermutation::identity({2, 2})), Error);
  EXPECT_THROW(TruncationScheme({1, 3}, ones_symbol(), EntryPermutation::identity({2, 2})), Error);
  const TruncationScheme ok({1, 3}, ones_symbol(), EntryPermutation::identity({3, 3}));
  EXPECT_THROW((void)truncated_image(ok, 2), Error);
}

TEST(TruncatedImage, IdentityRhoIsCornerOfSymbol) {
  Rng rng = make_rng(3);
  const ComplexMatrix f = random_gaussian(4, 4, rng);
  const TruncationScheme scheme({1, 2, 3, 4}, stored_symbol(f), EntryPermutation::identity({4, 4}));
  for (int n : scheme.levels()) EXPECT_EQ(truncated_image(scheme, n), corner_project(f, n));
  EXPECT_EQ(truncated_image(scheme, 4), f);
}

TEST(TruncatedImage, DiagonalRowSwapWithOnes) {
  const TruncationScheme scheme({2, 4}, ones_symbol(), diagonal_row_swap(4));
  const ComplexMatrix f2 = truncated_image(scheme, 2);
  // rho({1,2}^2) = {(1,1), (2,2), (1,2), (2,1)}.
  ComplexMatrix expected(4, 4);
  expected(0, 0) = expected(1, 1) = expected(0, 1) = expected(1, 0) = 1.0;
  EXPECT_EQ(f2, expected);
  EXPECT_EQ(truncated_image(scheme, 4), ComplexMatrix::ones(4, 4));
}

TEST(TruncatedImage, MatchesEnumeration) {
  for (int seed = 0; seed < 10; ++seed) {
    const TruncationScheme scheme = random_truncation_scheme({1, 2, 4, 5}, seed);
    for (int n : scheme.levels()) EXPECT_EQ(truncated_image(scheme, n), enumerated_image(scheme, n));
  }
}

TEST(TruncatedImage, ValuesFreezeOnceCovered) {
  const TruncationScheme scheme = random_truncation_scheme({1, 2, 3, 5, 6}, 17);
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j) {
      const int cover = scheme.covering_level({i, j});
      for (int n : scheme.levels()) {
        const Complex v = truncated_image(scheme, n).at({i, j});
        if (n >= cover)
          EXPECT_EQ(v, scheme.symbol({i, j}));
        else
          EXPECT_EQ(v, Complex(0.0));
      }
    }
}

TEST(PointwiseConvergence, IdentityOnesFollowsCorners) {
  Rng rng = make_rng(4);
  const ComplexMatrix a = random_gaussian(4, 4, rng);
  const TruncationScheme scheme({1, 2, 3, 4}, ones_symbol(), EntryPermutation::identity({4, 4}));
  const auto reports = pointwise_convergence_check(scheme, a, {{1, 1}, {3, 2}, {4, 4}});
  for (const auto& report : reports) {
    for (const auto& lv : report.levels) EXPECT_EQ(lv.value, corner_project(a, lv.n).at(report.probe));
    EXPECT_EQ(report.limit, a.at(report.probe));
    EXPECT_TRUE(report.stabilized);
    EXPECT_EQ(report.stabilized_at, std::max(report.probe.i, report.probe.j));
  }
}

TEST(PointwiseConvergence, ShiftedRhoStabilizesAtCover) {
  const TruncationScheme scheme = random_truncation_scheme({1, 2, 3, 4, 5}, 5);
  Rng rng = make_rng(6);
  const ComplexMatrix a = random_gaussian(5, 5, rng);
  const auto reports = pointwise_convergence_check(scheme, a, {{3, 3}});
  ASSERT_EQ(reports.size(), 1u);
  const EntryIndex pre = *scheme.rho().preimage({3, 3});
  EXPECT_EQ(reports[0].covering_level, std::max(pre.i, pre.j));
  EXPECT_EQ(reports[0].stabilized_at, reports[0].covering_level);
  EXPECT_EQ(reports[0].limit, scheme.symbol({3, 3}) * a.at(pre));
}

TEST(PointwiseConvergence, DeterministicShift) {
  const TruncationScheme scheme({2, 3, 6}, lower_triangular_symbol(), shift_permutation(6, 7));
  Rng rng = make_rng(7);
  const ComplexMatrix a = random_gaussian(6, 6, rng);
  std::vector<EntryIndex> probes;
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j) probes.push_back({i, j});
  for (const auto& report : pointwise_convergence_check(scheme, a, probes)) {
    const EntryIndex pre = *scheme.rho().preimage(report.probe);
    const Complex expected = scheme.symbol(report.probe) * a.at(pre);
    EXPECT_EQ(report.limit, expected);
    if (expected != Complex(0.0)) {
      EXPECT_TRUE(report.stabilized);
      EXPECT_EQ(report.stabilized_at, report.covering_level);
    } else {
      EXPECT_EQ(report.stabilized_at, 2);
    }
  }
}

TEST(PointwiseConvergence, RejectsBadProbes) {
  const TruncationScheme scheme({2}, ones_symbol(), EntryPermutation::identity({2, 2}));
  EXPECT_THROW((void)pointwise_convergence_check(scheme, ComplexMatrix(2, 2), {{3, 1}}), Error);
  EXPECT_THROW((void)pointwise_convergence_check(scheme, ComplexMatrix(3, 3), {{1, 1}}), Error);
}

TEST(LimitMap, NullPreservingAndSurjectiveIffWeightsNonzero) {
  for (int seed = 0; seed < 10; ++seed) {
    const TruncationScheme scheme = random_truncation_scheme({2, 4}, seed);
    const LinearMatrixMap map = limit_map(scheme);
    EXPECT_TRUE(is_schur_null_preserving(map));
    EXPECT_TRUE(recover_weighted_permutation(map).surjective);
  }
  ComplexMatrix f = ComplexMatrix::ones(3, 3);
  f(1, 2) = 0.0;
  const TruncationScheme holed({3}, stored_symbol(f), EntryPermutation::transpose(3));
  const LinearMatrixMap map = limit_map(holed);
  EXPECT_TRUE(is_schur_null_preserving(map));
  EXPECT_FALSE(recover_weighted_permutation(map).surjective);
  EXPECT_EQ(map.rank(), 8);
}

TEST(GrowthProbe, SquareRootGrowth) {
  const auto samples = rearrangement_growth_probe({1, 4, 16, 64});
  ASSERT_EQ(samples.size(), 4u);
  EXPECT_NEAR(samples[0].ratio, 1.0, 1e-12);
  EXPECT_NEAR(samples[1].ratio, 2.0, 1e-12);
  for (const auto& s : samples) EXPECT_NEAR(s.ratio, std::sqrt(s.n), 1e-12);
  for (std::size_t k = 1; k < samples.size(); ++k) EXPECT_GT(samples[k].ratio, samples[k - 1].ratio);
  EXPECT_THROW((void)rearrangement_growth_probe({4, 4}), Error);
}

TEST(GrowthProbe, SwapSendsIdentityToFirstRow) {
  const ComplexMatrix moved = permute_entries(ComplexMatrix::identity(5), diagonal_row_swap(5));
  for (int c = 0; c < 5; ++c) EXPECT_EQ(moved(0, c), Complex(1.0));
  EXPECT_NEAR(moved.frobenius_norm(), std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(oracle::spectral_norm(moved), std::sqrt(5.0), 1e-12);
}
