#include "schur/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace schur {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

ComplexMatrix random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = Complex{re, im};
    }
  return out;
}

ComplexMatrix random_unit_gaussian(int rows, int cols, Rng& rng) {
  ComplexMatrix a = random_gaussian(rows, cols, rng);
  a *= 1.0 / spectral_norm(a);
  return a;
}

Permutation random_permutation(int n, Rng& rng) {
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(std::move(images));
}

Complex random_weight(Rng& rng) {
  std::uniform_real_distribution<double> modulus(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double r = modulus(rng);
  return std::polar(r, phase(rng));
}

}  // namespace schur
