#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "gpcpd/tensor.hpp"

namespace gpcpd {

/// Seeded generator with a fixed, portable output sequence.
///
/// Engine: std::mt19937_64 (its sequence is fixed by the standard).
/// Uniforms use the top 53 bits: u = (x >> 11) * 2^-53 in [0, 1).
/// Gaussians use the Marsaglia polar method on v = 2u - 1 pairs, returning
/// the second variate of each accepted pair on the next call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  /// Uniform on (lo, hi), endpoints excluded.
  double uniform_open(double lo, double hi);
  double gaussian();
  /// Independent standard Gaussian real and imaginary parts.
  Complex complex_gaussian();

  Matrix complex_gaussian_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace gpcpd
