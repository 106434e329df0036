#include "schur/linmap.hpp"

#include <algorithm>
#include <string>

#include "eigen_bridge.hpp"
#include "schur/random.hpp"

namespace schur {

namespace {

std::string shape_str(GridShape s) { return std::to_string(s.rows) + "x" + std::to_string(s.cols); }

void require_valid(GridShape s) {
  if (s.rows < 1 || s.cols < 1)
    throw Error(ErrorCode::InvalidArgument, "grid shape " + shape_str(s) + " must be at least 1x1");
}

}  // namespace

EntryPermutation::EntryPermutation(GridShape src, GridShape dst,
                                   std::vector<std::optional<EntryIndex>> mapping)
    : src_(src), dst_(dst), forward_(std::move(mapping)) {
  require_valid(src_);
  require_valid(dst_);
  if (static_cast<int>(forward_.size()) != src_.size())
    throw Error(ErrorCode::ShapeMismatch, "entry permutation needs " + std::to_string(src_.size()) +
                                              " slots, got " + std::to_string(forward_.size()));
  backward_.assign(static_cast<std::size_t>(dst_.size()), std::nullopt);
  for (int k = 0; k < src_.size(); ++k) {
    const auto& target = forward_[static_cast<std::size_t>(k)];
    if (!target) continue;
    if (!dst_.contains(*target))
      throw Error(ErrorCode::IndexOutOfRange, "target (" + std::to_string(target->i) + "," +
                                                  std::to_string(target->j) + ") outside " +
                                                  shape_str(dst_));
    auto& slot = backward_[static_cast<std::size_t>(dst_.linear(*target))];
    if (slot)
      throw Error(ErrorCode::NotBijective, "two source entries map to (" + std::to_string(target->i) +
                                               "," + std::to_string(target->j) + ")");
    slot = src_.entry(k);
  }
}

EntryPermutation EntryPermutation::identity(GridShape shape) {
  return from_function(shape, shape, [](EntryIndex x) { return std::optional<EntryIndex>(x); });
}

EntryPermutation EntryPermutation::transpose(int n) {
  return from_function({n, n}, {n, n},
                       [](EntryIndex x) { return std::optional<EntryIndex>(EntryIndex{x.j, x.i}); });
}

EntryPermutation EntryPermutation::from_function(
    GridShape src, GridShape dst, const std::function<std::optional<EntryIndex>(EntryIndex)>& rho) {
  require_valid(src);
  std::vector<std::optional<EntryIndex>> mapping;
  mapping.reserve(static_cast<std::size_t>(src.size()));
  for (int k = 0; k < src.size(); ++k) mapping.push_back(rho(src.entry(k)));
  return EntryPermutation(src, dst, std::move(mapping));
}

std::optional<EntryIndex> EntryPermutation::image(EntryIndex src) const {
  if (!src_.contains(src)) throw Error(ErrorCode::IndexOutOfRange, "source index outside " + shape_str(src_));
  return forward_[static_cast<std::size_t>(src_.linear(src))];
}

std::optional<EntryIndex> EntryPermutation::preimage(EntryIndex dst) const {
  if (!dst_.contains(dst))
    throw Error(ErrorCode::IndexOutOfRange, "destination index outside " + shape_str(dst_));
  return backward_[static_cast<std::size_t>(dst_.linear(dst))];
}

bool EntryPermutation::is_total() const noexcept {
  return std::all_of(forward_.begin(), forward_.end(), [](const auto& t) { return t.has_value(); });
}

bool EntryPermutation::is_bijection() const noexcept {
  return src_.size() == dst_.size() && is_total();
}

std::vector<EntryIndex> EntryPermutation::unused_destinations() const {
  std::vector<EntryIndex> out;
  for (int k = 0; k < dst_.size(); ++k)
    if (!backward_[static_cast<std::size_t>(k)]) out.push_back(dst_.entry(k));
  return out;
}

EntryPermutation EntryPermutation::inverse() const { return EntryPermutation(dst_, src_, backward_); }

ComplexMatrix permute_entries(const ComplexMatrix& a, const EntryPermutation& rho) {
  if (shape_of(a) != rho.src_shape())
    throw Error(ErrorCode::ShapeMismatch, "matrix does not match the source grid of rho");
  const GridShape src = rho.src_shape();
  ComplexMatrix out(rho.dst_shape().rows, rho.dst_shape().cols);
  for (int k = 0; k < src.size(); ++k) {
    const auto& target = rho.mapping()[static_cast<std::size_t>(k)];
    if (!target) continue;
    const EntryIndex from = src.entry(k);
    out(target->i - 1, target->j - 1) = a(from.i - 1, from.j - 1);
  }
  return out;
}

LinearMatrixMap::LinearMatrixMap(GridShape src, GridShape dst, std::vector<ComplexMatrix> images)
    : src_(src), dst_(dst), images_(std::move(images)) {
  require_valid(src_);
  require_valid(dst_);
  if (static_cast<int>(images_.size()) != src_.size())
    throw Error(ErrorCode::ShapeMismatch, "map on " + shape_str(src_) + " needs " +
                                              std::to_string(src_.size()) + " images, got " +
                                              std::to_string(images_.size()));
  for (const auto& img : images_)
    if (shape_of(img) != dst_)
      throw Error(ErrorCode::ShapeMismatch, "image of shape " + shape_str(shape_of(img)) +
                                                " in a map into " + shape_str(dst_));
}

LinearMatrixMap LinearMatrixMap::from_action(GridShape src, GridShape dst,
                                             const std::function<ComplexMatrix(const ComplexMatrix&)>& action) {
  require_valid(src);
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<std::size_t>(src.size()));
  for (int k = 0; k < src.size(); ++k) images.push_back(action(matrix_unit(src.rows, src.cols, src.entry(k))));
  return LinearMatrixMap(src, dst, std::move(images));
}

LinearMatrixMap LinearMatrixMap::identity(GridShape shape) {
  return from_action(shape, shape, [](const ComplexMatrix& a) { return a; });
}

LinearMatrixMap LinearMatrixMap::transpose(int n) {
  return from_action({n, n}, {n, n}, [](const ComplexMatrix& a) { return a.transpose(); });
}

const ComplexMatrix& LinearMatrixMap::image(EntryIndex src) const {
  if (!src_.contains(src)) throw Error(ErrorCode::IndexOutOfRange, "source index outside " + shape_str(src_));
  return images_[static_cast<std::size_t>(src_.linear(src))];
}

ComplexMatrix LinearMatrixMap::apply(const ComplexMatrix& a) const {
  if (shape_of(a) != src_)
    throw Error(ErrorCode::ShapeMismatch,
                "input " + shape_str(shape_of(a)) + " does not match source " + shape_str(src_));
  ComplexMatrix out(dst_.rows, dst_.cols);
  auto acc = out.entries();
  for (int k = 0; k < src_.size(); ++k) {
    const EntryIndex x = src_.entry(k);
    const Complex coeff = a(x.i - 1, x.j - 1);
    if (coeff == Complex{}) continue;
    const auto img = images_[static_cast<std::size_t>(k)].entries();
    for (std::size_t t = 0; t < img.size(); ++t) acc[t] += coeff * img[t];
  }
  return out;
}

int LinearMatrixMap::rank() const {
  Eigen::MatrixXcd columns(dst_.size(), src_.size());
  for (int k = 0; k < src_.size(); ++k) {
    const auto img = images_[static_cast<std::size_t>(k)].entries();
    for (int t = 0; t < dst_.size(); ++t) columns(t, k) = img[static_cast<std::size_t>(t)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(columns);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > 1e-10 * s(0)) ++r;
  return r;
}

LinearMatrixMap from_weighted_permutation(const ComplexMatrix& f, const EntryPermutation& rho) {
  if (shape_of(f) != rho.dst_shape())
    throw Error(ErrorCode::ShapeMismatch, "weight matrix must have the destination shape of rho");
  const GridShape src = rho.src_shape();
  const GridShape dst = rho.dst_shape();
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<std::size_t>(src.size()));
  for (int k = 0; k < src.size(); ++k) {
    ComplexMatrix img(dst.rows, dst.cols);
    if (const auto& target = rho.mapping()[static_cast<std::size_t>(k)])
      img(target->i - 1, target->j - 1) = f(target->i - 1, target->j - 1);
    images.push_back(std::move(img));
  }
  return LinearMatrixMap(src, dst, std::move(images));
}

LinearMatrixMap from_conjugation(const Permutation& pi, const Permutation& sigma, bool transposed) {
  const int m = pi.size();
  const int n = sigma.size();
  if (transposed && m != n)
    throw Error(ErrorCode::ShapeMismatch, "transposed conjugation requires a square shape");
  const ComplexMatrix u = permutation_unitary(pi);
  const ComplexMatrix v = permutation_unitary(sigma);
  return LinearMatrixMap::from_action({m, n}, {m, n}, [&](const ComplexMatrix& a) {
    return matmul(matmul(u, transposed ? a.transpose() : a), v);
  });
}

double operator_norm_lower_bound(const LinearMatrixMap& map, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  const GridShape src = map.src_shape();
  double best = 0.0;
  for (const auto& img : map.images()) best = std::max(best, spectral_norm(img));

  if (src.size() <= 144) {
    for (int p = 0; p < src.size(); ++p) {
      const EntryIndex x = src.entry(p);
      for (int q = p + 1; q < src.size(); ++q) {
        const EntryIndex y = src.entry(q);
        if (x.i == y.i || x.j == y.j) continue;
        best = std::max(best, spectral_norm(map.images()[static_cast<std::size_t>(p)] +
                                            map.images()[static_cast<std::size_t>(q)]));
      }
    }
  }

  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
    const ComplexMatrix a = random_unit_gaussian(src.rows, src.cols, rng);
    best = std::max(best, spectral_norm(map.apply(a)));
  }
  return best;
}

LinearMatrixMap random_map(MapKind kind, GridShape shape, std::uint64_t seed, double kernel_fraction) {
  require_valid(shape);
  Rng rng = make_rng(seed);
  switch (kind) {
    case MapKind::WeightedPermutation: {
      const Permutation cells = random_permutation(shape.size(), rng);
      std::bernoulli_distribution to_kernel(std::clamp(kernel_fraction, 0.0, 1.0));
      std::vector<std::optional<EntryIndex>> mapping;
      ComplexMatrix f(shape.rows, shape.cols);
      for (int k = 0; k < shape.size(); ++k) {
        const EntryIndex target = shape.entry(cells(k + 1) - 1);
        f(target.i - 1, target.j - 1) = random_weight(rng);
        if (kernel_fraction > 0.0 && to_kernel(rng))
          mapping.emplace_back(std::nullopt);
        else
          mapping.emplace_back(target);
      }
      return from_weighted_permutation(f, EntryPermutation(shape, shape, std::move(mapping)));
    }
    case MapKind::Conjugation: {
      const Permutation pi = random_permutation(shape.rows, rng);
      const Permutation sigma = random_permutation(shape.cols, rng);
      const bool transposed = shape.rows == shape.cols && std::bernoulli_distribution(0.5)(rng);
      return from_conjugation(pi, sigma, transposed);
    }
    case MapKind::Dense: {
      std::vector<ComplexMatrix> images;
      for (int k = 0; k < shape.size(); ++k) images.push_back(random_gaussian(shape.rows, shape.cols, rng));
      return LinearMatrixMap(shape, shape, std::move(images));
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown map kind");
}

}  // namespace schur
