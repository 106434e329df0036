#include "schur/multiplier_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "eigen_bridge.hpp"
#include "schur/random.hpp"

namespace schur {

namespace {

constexpr double kMeetTolerance = 1e-8;
constexpr double kStallGap = 1e-6;
constexpr int kStallWindow = 500;
constexpr int kCertifyEvery = 20;

double ratio(const SchurSymbol& psi, const ComplexMatrix& a) {
  return spectral_norm(psi.apply(a)) / spectral_norm(a);
}

LowerBound normalized(const SchurSymbol& psi, ComplexMatrix a) {
  a *= 1.0 / spectral_norm(a);
  const double value = spectral_norm(psi.apply(a));
  return LowerBound{value, std::move(a)};
}

ComplexMatrix fourier_matrix(int rows, int cols) {
  const int n = std::max(rows, cols);
  ComplexMatrix f(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      f(r, c) = std::polar(1.0, 2.0 * std::numbers::pi * r * c / n);
  return f;
}

bool is_real(const ComplexMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(),
                     [](const Complex& z) { return z.imag() == 0.0; });
}

struct Certificate {
  double bound = std::numeric_limits<double>::infinity();
  ComplexMatrix matrix{1, 1};
};

/// Turns a Hermitian (p+q)-square matrix into a certificate: overwrite the
/// off-diagonal block with psi, shift the diagonal until PSD, then rebalance
/// the two diagonal blocks by congruence with diag(sqrt(c) I, I / sqrt(c)).
Certificate repair_certificate(Eigen::MatrixXcd z, const Eigen::MatrixXcd& psi) {
  const Eigen::Index p = psi.rows();
  const Eigen::Index q = psi.cols();
  z = (0.5 * (z + z.adjoint())).eval();
  z.topRightCorner(p, q) = psi;
  z.bottomLeftCorner(q, p) = psi.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(z, Eigen::EigenvaluesOnly);
  const double shift = std::max(0.0, -eig.eigenvalues()(0)) + 1e-11 * (1.0 + z.norm());
  z.diagonal().array() += shift;
  const double alpha = z.diagonal().head(p).real().maxCoeff();
  const double beta = z.diagonal().tail(q).real().maxCoeff();
  const double c = std::sqrt(beta / alpha);
  z.topLeftCorner(p, p) *= c;
  z.bottomRightCorner(q, q) *= 1.0 / c;
  return {std::sqrt(alpha * beta), detail::from_eigen(z)};
}

/// Gram certificate from the factorization psi = D^{-1} (U S V^*) E^{-1} of
/// M = D psi E with D = diag(row_scale), E = diag(col_scale): the rows of
/// D^{-1} U S^{1/2} and conj(E)^{-1} V S^{1/2} have inner products psi(i,j).
/// Unit scalings give the plain SVD certificate, whose bound is at most
/// ||psi||; the top singular pair of psi * a at an optimal a gives a tight one.
Certificate scaled_svd_certificate(const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& row_scale,
                                   const Eigen::VectorXcd& col_scale) {
  const Eigen::MatrixXcd m = row_scale.asDiagonal() * psi * col_scale.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd root = svd.singularValues().cwiseSqrt();
  const Eigen::MatrixXcd left = row_scale.cwiseInverse().asDiagonal() * svd.matrixU() * root.asDiagonal();
  const Eigen::MatrixXcd right =
      col_scale.conjugate().cwiseInverse().asDiagonal() * svd.matrixV() * root.asDiagonal();
  Eigen::MatrixXcd stacked(psi.rows() + psi.cols(), root.size());
  stacked << left, right;
  return repair_certificate(stacked * stacked.adjoint(), psi);
}

/// Certificates built from the dual pair (xi, eta) of an ascent optimum,
/// nudged away from zero entries so the scalings stay invertible.
Certificate dual_certificate(const ComplexMatrix& psi, const ComplexMatrix& witness) {
  const Eigen::MatrixXcd symbol = detail::to_eigen(psi);
  Eigen::JacobiSVD<Eigen::MatrixXcd> top(symbol.cwiseProduct(detail::to_eigen(witness)),
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXcd xi = top.matrixU().col(0).conjugate();
  const Eigen::VectorXcd eta = top.matrixV().col(0);
  auto nudge = [](const Eigen::VectorXcd& v, double eps) {
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double mag = std::abs(v(k));
      out(k) = mag > 0.0 ? v(k) * ((mag + eps) / mag) : Complex(eps, 0.0);
    }
    return out;
  };
  Certificate best;
  for (double eps : {0.0, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2}) {
    const Eigen::VectorXcd d = nudge(xi, eps);
    const Eigen::VectorXcd e = nudge(eta, eps);
    if (d.cwiseAbs().minCoeff() == 0.0 || e.cwiseAbs().minCoeff() == 0.0) continue;
    Certificate c = scaled_svd_certificate(symbol, d, e);
    if (std::isfinite(c.bound) && c.bound < best.bound) best = std::move(c);
  }
  return best;
}

/// Gram certificates of psi = psi I = I psi; their bounds are the largest
/// row and column norms of psi.
Certificate row_column_certificate(const Eigen::MatrixXcd& psi) {
  const Eigen::Index p = psi.rows();
  const Eigen::Index q = psi.cols();
  Eigen::MatrixXcd by_rows(p + q, q);
  by_rows << psi, Eigen::MatrixXcd::Identity(q, q);
  Eigen::MatrixXcd by_cols(p + q, p);
  by_cols << Eigen::MatrixXcd::Identity(p, p), psi.adjoint();
  Certificate a = repair_certificate(by_rows * by_rows.adjoint(), psi);
  Certificate b = repair_certificate(by_cols * by_cols.adjoint(), psi);
  return a.bound <= b.bound ? a : b;
}

/// Dykstra iteration for one value of t, in real or complex arithmetic.
template <class Scalar>
class HaagerupProjector {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  HaagerupProjector(const ComplexMatrix& psi, double tol) : p_(psi.rows()), q_(psi.cols()), tol_(tol) {
    psi_.resize(p_, q_);
    for (int r = 0; r < p_; ++r)
      for (int c = 0; c < q_; ++c) psi_(r, c) = convert(psi(r, c));
  }

  FeasibilityResult run(double t, int max_iterations, const ComplexMatrix* start) {
    const int n = p_ + q_;
    Mat x = Mat::Identity(n, n) * Scalar(t);
    if (start != nullptr) {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) x(r, c) = convert((*start)(r, c));
    }
    x.topRightCorner(p_, q_) = psi_;
    x.bottomLeftCorner(q_, p_) = psi_.adjoint();
    Mat p_corr = Mat::Zero(n, n);
    Mat q_corr = Mat::Zero(n, n);
    Mat y(n, n);

    FeasibilityResult result;
    result.certified_bound = std::numeric_limits<double>::infinity();
    double last_gap = std::numeric_limits<double>::infinity();
    int stalled = 0;

    for (int it = 1; it <= max_iterations; ++it) {
      result.iterations = it;
      Mat shifted = x + p_corr;
      project_psd(shifted, y);
      p_corr = shifted - y;

      shifted = y + q_corr;
      x = shifted;
      project_box(x, t);
      q_corr = shifted - x;

      const double gap = (y - x).norm() / std::max(1.0, x.norm());
      if (it % kCertifyEvery == 0 || gap <= kMeetTolerance) {
        certify(x, result);
        if (gap <= kMeetTolerance || result.certified_bound <= t + 0.25 * tol_) {
          result.feasible = true;
          return result;
        }
      }
      if (gap > kStallGap && std::abs(gap - last_gap) <= 1e-6 * gap) {
        if (++stalled >= kStallWindow) break;
      } else {
        stalled = 0;
      }
      last_gap = gap;
    }
    certify(x, result);
    return result;
  }

 private:
  static Scalar convert(const Complex& z) {
    if constexpr (std::is_same_v<Scalar, double>)
      return z.real();
    else
      return z;
  }

  void project_psd(const Mat& z, Mat& out) {
    eig_.compute(z);
    const Eigen::VectorXd clipped = eig_.eigenvalues().cwiseMax(0.0);
    const Mat& v = eig_.eigenvectors();
    out.noalias() = v * clipped.asDiagonal() * v.adjoint();
  }

  void project_box(Mat& z, double t) const {
    z.topRightCorner(p_, q_) = psi_;
    z.bottomLeftCorner(q_, p_) = psi_.adjoint();
    for (Eigen::Index k = 0; k < z.rows(); ++k) z(k, k) = Scalar(std::min(std::real(z(k, k)), t));
  }

  void certify(const Mat& box_point, FeasibilityResult& result) const {
    Eigen::MatrixXcd z = box_point.template cast<Complex>();
    Certificate c = repair_certificate(std::move(z), psi_.template cast<Complex>());
    if (c.bound < result.certified_bound) {
      result.certified_bound = c.bound;
      result.certificate = std::move(c.matrix);
    }
  }

  int p_;
  int q_;
  double tol_;
  Mat psi_;
  Eigen::SelfAdjointEigenSolver<Mat> eig_;
};

/// Log-barrier path following for min t over Z = t I + [[A, psi], [psi^*, B]]
/// with A, B Hermitian of zero diagonal, Z positive definite. Every iterate is
/// a strictly feasible certificate, so the bound only needs repair for
/// rounding.
class BarrierRefiner {
 public:
  BarrierRefiner(const Eigen::MatrixXcd& psi, bool real) : psi_(psi), p_(psi.rows()), n_(psi.rows() + psi.cols()) {
    for (Eigen::Index r = 0; r < n_; ++r)
      for (Eigen::Index c = r + 1; c < n_; ++c) {
        if ((r < p_) != (c < p_)) continue;
        basis_.push_back({r, c, false});
        if (!real) basis_.push_back({r, c, true});
      }
  }

  /// Starts at `start` (diagonal raised to t0 > its largest diagonal entry)
  /// and follows the central path until its duality gap drops below
  /// `target_gap` or `max_steps` Newton steps are spent.
  Certificate run(const ComplexMatrix& start, double t0, double target_gap, int max_steps, int& steps) {
    const Eigen::MatrixXcd z0 = detail::to_eigen(start);
    Eigen::VectorXd v(basis_.size() + 1);
    v(0) = t0;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const Complex w = z0(basis_[k].r, basis_[k].c);
      v(k + 1) = basis_[k].imaginary ? w.imag() : w.real();
    }
    Certificate best = repair_certificate(assemble(v), psi_);
    const double n = static_cast<double>(n_);
    double tau = n / std::max(target_gap, 1e-3 * t0);
    steps = 0;
    while (steps < max_steps) {
      if (!center(v, tau, max_steps, steps)) break;
      if (Certificate c = repair_certificate(assemble(v), psi_); c.bound < best.bound) best = std::move(c);
      if (n / tau <= target_gap) break;
      tau *= 8.0;
    }
    return best;
  }

 private:
  struct Direction {
    Eigen::Index r;
    Eigen::Index c;
    bool imaginary;
  };

  Eigen::MatrixXcd assemble(const Eigen::VectorXd& v) const {
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(n_, n_) * v(0);
    z.topRightCorner(p_, n_ - p_) = psi_;
    z.bottomLeftCorner(n_ - p_, p_) = psi_.adjoint();
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const Complex w = basis_[k].imaginary ? Complex(0.0, v(k + 1)) : Complex(v(k + 1), 0.0);
      z(basis_[k].r, basis_[k].c) += w;
      z(basis_[k].c, basis_[k].r) += std::conj(w);
    }
    return z;
  }

  /// tr(M E_k) for Hermitian M, with E_0 = I.
  double pair(const Eigen::MatrixXcd& m, std::size_t k) const {
    if (k == 0) return m.diagonal().real().sum();
    const Direction& d = basis_[k - 1];
    return d.imaginary ? 2.0 * m(d.r, d.c).imag() : 2.0 * m(d.r, d.c).real();
  }

  /// W E_k W for Hermitian W.
  Eigen::MatrixXcd sandwich(const Eigen::MatrixXcd& w, std::size_t k) const {
    if (k == 0) return w * w;
    const Direction& d = basis_[k - 1];
    const Eigen::MatrixXcd a = w.col(d.r) * w.row(d.c);
    const Eigen::MatrixXcd b = w.col(d.c) * w.row(d.r);
    return d.imaginary ? Eigen::MatrixXcd(Complex(0.0, 1.0) * (a - b)) : Eigen::MatrixXcd(a + b);
  }

  double barrier(const Eigen::VectorXd& v, double tau, bool& inside) const {
    Eigen::LLT<Eigen::MatrixXcd> llt(assemble(v));
    inside = llt.info() == Eigen::Success;
    if (!inside) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal().real();
    if ((diag.array() <= 0.0).any()) {
      inside = false;
      return std::numeric_limits<double>::infinity();
    }
    return tau * v(0) - 2.0 * diag.array().log().sum();
  }

  /// Damped Newton on tau t - log det Z. Returns false if no progress is
  /// possible.
  bool center(Eigen::VectorXd& v, double tau, int max_steps, int& steps) {
    const std::size_t dim = basis_.size() + 1;
    for (int inner = 0; inner < 50 && steps < max_steps; ++inner) {
      ++steps;
      const Eigen::MatrixXcd z = assemble(v);
      const Eigen::MatrixXcd w = z.llt().solve(Eigen::MatrixXcd::Identity(n_, n_));
      Eigen::VectorXd g(dim);
      Eigen::MatrixXd h(dim, dim);
      for (std::size_t k = 0; k < dim; ++k) {
        g(k) = -pair(w, k);
        const Eigen::MatrixXcd s = sandwich(w, k);
        for (std::size_t l = 0; l < dim; ++l) h(k, l) = pair(s, l);
      }
      g(0) += tau;
      const Eigen::VectorXd delta = h.ldlt().solve(-g);
      const double decrement = -g.dot(delta);
      if (!std::isfinite(decrement)) return false;
      if (decrement < 1e-10) return true;
      bool inside = false;
      const double f0 = barrier(v, tau, inside);
      double step = 1.0;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        const double f1 = barrier(v + step * delta, tau, inside);
        if (inside && f1 <= f0 - 0.25 * step * decrement) break;
      }
      if (!inside) return false;
      v += step * delta;
    }
    return true;
  }

  Eigen::MatrixXcd psi_;
  Eigen::Index p_;
  Eigen::Index n_;
  std::vector<Direction> basis_;
};

}  // namespace

LowerBound multiplier_lower_bound(const SchurSymbol& psi, int trials, std::uint64_t seed) {
  if (trials < 0) throw Error(ErrorCode::InvalidArgument, "trials must be non-negative");
  const int p = psi.rows();
  const int q = psi.cols();
  LowerBound best{-1.0, ComplexMatrix(p, q)};
  auto consider = [&](const ComplexMatrix& a) {
    const double value = ratio(psi, a);
    if (value > best.value) best = normalized(psi, a);
  };
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= q; ++j) consider(matrix_unit(p, q, {i, j}));
  consider(fourier_matrix(p, q));
  for (int k = 0; k < trials; ++k) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(k));
    consider(random_gaussian(p, q, rng));
  }
  return best;
}

LowerBound ascend_lower_bound(const SchurSymbol& psi, const ComplexMatrix& start, int max_steps) {
  const Eigen::MatrixXcd symbol = detail::to_eigen(psi.matrix());
  LowerBound best = normalized(psi, start);
  Eigen::MatrixXcd a = detail::to_eigen(best.witness);
  double value = best.value;
  for (int step = 0; step < max_steps && value > 0.0; ++step) {
    const Eigen::MatrixXcd image = symbol.cwiseProduct(a);
    Eigen::JacobiSVD<Eigen::MatrixXcd> top(image, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXcd xi = top.matrixU().col(0);
    const Eigen::VectorXcd eta = top.matrixV().col(0);
    const Eigen::MatrixXcd weighted = xi.conjugate().asDiagonal() * symbol * eta.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> polar(weighted, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXcd next = (polar.matrixU() * polar.matrixV().adjoint()).conjugate();
    const double next_norm = detail::spectral_norm(next);
    if (next_norm == 0.0) break;
    const double next_value = detail::spectral_norm(symbol.cwiseProduct(next)) / next_norm;
    if (next_value <= value * (1.0 + 1e-14)) break;
    a = next / next_norm;
    value = next_value;
  }
  LowerBound out = normalized(psi, detail::from_eigen(a));
  return out.value >= best.value ? out : best;
}

FeasibilityResult haagerup_feasibility(const SchurSymbol& psi, double t, const MultiplierNormOptions& options,
                                       const ComplexMatrix* start) {
  if (start != nullptr && (start->rows() != psi.rows() + psi.cols() || start->cols() != start->rows()))
    throw Error(ErrorCode::ShapeMismatch, "start point must be (p+q) x (p+q)");
  if (options.real_fast_path && is_real(psi.matrix())) {
    HaagerupProjector<double> solver(psi.matrix(), options.tol);
    return solver.run(t, options.max_iterations, start);
  }
  HaagerupProjector<Complex> solver(psi.matrix(), options.tol);
  return solver.run(t, options.max_iterations, start);
}

MultiplierNormEstimate multiplier_norm(const SchurSymbol& psi, const MultiplierNormOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  const int p = psi.rows();
  const int q = psi.cols();
  if (p > 32 || q > 32) throw Error(ErrorCode::InvalidArgument, "symbols are limited to 32x32");

  MultiplierNormEstimate est;
  if (psi.matrix().max_abs() == 0.0) {
    est.lower_witness = matrix_unit(p, q, {1, 1});
    est.upper_witness = ComplexMatrix(p + q, p + q);
    return est;
  }

  // Lower end: probes, then ascent from the probe winner, the Fourier matrix,
  // the all-ones matrix and a few Gaussian starts.
  LowerBound lower = multiplier_lower_bound(psi, options.lower_trials, options.seed);
  std::vector<ComplexMatrix> starts{lower.witness, fourier_matrix(p, q), ComplexMatrix::ones(p, q)};
  for (int k = 0; k < options.lower_trials; ++k) {
    Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(k));
    starts.push_back(random_gaussian(p, q, rng));
  }
  for (const auto& start : starts) {
    LowerBound candidate = ascend_lower_bound(psi, start);
    if (candidate.value > lower.value) lower = std::move(candidate);
  }
  est.lower = lower.value;
  est.lower_witness = std::move(lower.witness);

  // Upper end: the best of the plain SVD, dual-scaled, row and column Gram
  // certificates. All are exact PSD certificates.
  const Eigen::MatrixXcd symbol = detail::to_eigen(psi.matrix());
  Certificate upper = scaled_svd_certificate(symbol, Eigen::VectorXcd::Ones(p), Eigen::VectorXcd::Ones(q));
  if (Certificate dual = dual_certificate(psi.matrix(), est.lower_witness); dual.bound < upper.bound)
    upper = std::move(dual);
  if (Certificate lines = row_column_certificate(symbol); lines.bound < upper.bound) upper = std::move(lines);
  est.upper = upper.bound;
  est.upper_witness = std::move(upper.matrix);

  double search_lo = est.lower;
  double search_hi = est.upper;
  while (est.upper - est.lower > options.tol && est.bisections < options.max_bisections &&
         search_hi - search_lo > 0.0625 * options.tol) {
    const double t = 0.5 * (search_lo + search_hi);
    FeasibilityResult run = haagerup_feasibility(psi, t, options, &est.upper_witness);
    ++est.bisections;
    est.iterations += run.iterations;
    if (run.certified_bound < est.upper) {
      est.upper = run.certified_bound;
      est.upper_witness = std::move(run.certificate);
    }
    if (run.feasible)
      search_hi = t;
    else
      search_lo = t;
    search_hi = std::min(search_hi, est.upper);
  }
  if (est.upper - est.lower > options.tol && options.max_newton_steps > 0) {
    const double t0 = est.upper + 0.5 * (est.upper - est.lower);
    BarrierRefiner refiner(symbol, options.real_fast_path && is_real(psi.matrix()));
    Certificate refined =
        refiner.run(est.upper_witness, t0, 0.25 * options.tol, options.max_newton_steps, est.newton_steps);
    if (refined.bound < est.upper) {
      est.upper = refined.bound;
      est.upper_witness = std::move(refined.matrix);
    }
  }
  est.upper = std::max(est.upper, est.lower);
  est.budget_exceeded = est.upper - est.lower > options.tol;
  return est;
}

CertificateCheck check_block_certificate(const ComplexMatrix& certificate, const SchurSymbol& psi) {
  const int p = psi.rows();
  const int q = psi.cols();
  if (certificate.rows() != p + q || certificate.cols() != p + q)
    throw Error(ErrorCode::ShapeMismatch, "certificate must be (p+q) x (p+q)");
  CertificateCheck check;
  const Eigen::MatrixXcd z = detail::to_eigen(certificate);
  check.hermitian_error = (z - z.adjoint()).cwiseAbs().maxCoeff();
  check.max_diagonal = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < p + q; ++k) {
    check.max_diagonal = std::max(check.max_diagonal, z(k, k).real());
    check.hermitian_error = std::max(check.hermitian_error, std::abs(z(k, k).imag()));
  }
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < q; ++c)
      check.block_error = std::max(check.block_error, std::abs(z(r, p + c) - psi.matrix()(r, c)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (z + z.adjoint()), Eigen::EigenvaluesOnly);
  check.min_eigenvalue = eig.eigenvalues()(0);
  return check;
}

SchurSymbol triangular_truncation_symbol(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "truncation order must be positive");
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = 1.0;
  return SchurSymbol(std::move(m));
}

ChainReport chain_check(const SchurSymbol& psi, const MultiplierNormOptions& options) {
  const MultiplierNormEstimate est = multiplier_norm(psi, options);
  ChainReport report;
  report.max_entry = psi.matrix().max_abs();
  report.lower = est.lower;
  report.upper = est.upper;
  report.spectral = spectral_norm(psi.matrix());
  constexpr double slack = 1e-9;
  report.holds = report.max_entry <= report.lower + slack && report.lower <= report.upper + slack &&
                 report.upper <= report.spectral + slack;
  return report;
}

}  // namespace schur
