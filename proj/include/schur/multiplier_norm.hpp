#pragma once

#include <cstdint>

#include "schur/matrix.hpp"

namespace schur {

/// Finite symbol psi of the Schur multiplier a -> psi * a.
class SchurSymbol {
 public:
  explicit SchurSymbol(ComplexMatrix matrix) : matrix_(std::move(matrix)) {}

  [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] int rows() const noexcept { return matrix_.rows(); }
  [[nodiscard]] int cols() const noexcept { return matrix_.cols(); }
  [[nodiscard]] ComplexMatrix apply(const ComplexMatrix& a) const { return schur_product(matrix_, a); }

 private:
  ComplexMatrix matrix_;
};

struct MultiplierNormOptions {
  /// Target width of the certified bracket.
  double tol = 1e-3;
  /// Random starts for the lower-bound search.
  int lower_trials = 8;
  std::uint64_t seed = 0;
  /// Iteration cap of one feasibility test.
  int max_iterations = 20000;
  int max_bisections = 64;
  /// Newton steps of the barrier refinement run when bisection leaves the
  /// bracket wider than tol; 0 disables it.
  int max_newton_steps = 400;
  /// Solve real symbols in real arithmetic.
  bool real_fast_path = true;
};

/// Certified bracket lower <= ||psi||_m <= upper.
struct MultiplierNormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  /// Unit-norm a with ||psi * a|| = lower.
  ComplexMatrix lower_witness{1, 1};
  /// PSD [[D1, psi], [psi^*, D2]] with every diagonal entry <= upper.
  ComplexMatrix upper_witness{1, 1};
  /// Projection iterations summed over all feasibility tests.
  int iterations = 0;
  int bisections = 0;
  int newton_steps = 0;
  /// The bracket is wider than tol (iteration or bisection budget ran out).
  bool budget_exceeded = false;
};

struct LowerBound {
  double value = 0.0;
  ComplexMatrix witness{1, 1};
};

/// max ||psi * a|| / ||a|| over the matrix units, the discrete Fourier
/// matrix, and `trials` Gaussian samples drawn from streams (seed, k).
LowerBound multiplier_lower_bound(const SchurSymbol& psi, int trials, std::uint64_t seed);

/// Monotone ascent from `start`: with (xi, eta) the top singular pair of
/// psi * a, the next iterate is conj(U V^*) for the polar factor of
/// diag(conj xi) psi diag(eta). Each step never decreases ||psi * a||.
LowerBound ascend_lower_bound(const SchurSymbol& psi, const ComplexMatrix& start, int max_steps = 300);

struct FeasibilityResult {
  /// The projection tracks met (relative gap <= 1e-8) or the repaired
  /// certificate already proves ||psi||_m <= t + tol / 4.
  bool feasible = false;
  int iterations = 0;
  /// Best certified upper bound found during the run; the certificate's
  /// off-diagonal block is psi exactly and it is PSD after a diagonal shift.
  double certified_bound = 0.0;
  ComplexMatrix certificate{1, 1};
};

/// Dykstra alternating projections between the PSD cone and
/// {Z : Z_12 = psi, diag Z <= t}, started at `start` (with its off-diagonal
/// block overwritten by psi) or, when null, at [[tI, psi], [psi^*, tI]].
FeasibilityResult haagerup_feasibility(const SchurSymbol& psi, double t, const MultiplierNormOptions& options = {},
                                       const ComplexMatrix* start = nullptr);

/// Bisection on t with certified bounds at both ends.
MultiplierNormEstimate multiplier_norm(const SchurSymbol& psi, const MultiplierNormOptions& options = {});

struct CertificateCheck {
  double min_eigenvalue = 0.0;
  /// max |Z_12 - psi|.
  double block_error = 0.0;
  double max_diagonal = 0.0;
  /// max |Im Z_kk| plus the anti-Hermitian residual.
  double hermitian_error = 0.0;
};

/// Recomputes the quantities a block certificate has to satisfy.
CertificateCheck check_block_certificate(const ComplexMatrix& certificate, const SchurSymbol& psi);

/// n x n lower triangular 0/1 matrix, the truncation of the indicator of
/// {(i,j) : j <= i}.
SchurSymbol triangular_truncation_symbol(int n);

struct ChainReport {
  double max_entry = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double spectral = 0.0;
  bool holds = false;
};

/// max|psi(i,j)| <= lower <= upper <= ||psi||, with slack 1e-9.
ChainReport chain_check(const SchurSymbol& psi, const MultiplierNormOptions& options = {});

}  // namespace schur
