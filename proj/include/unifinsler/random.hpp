#pragma once

#include <cstdint>
#include <random>

#include "unifinsler/linalg.hpp"

namespace unifinsler {

// Seeded generator for test matrices. One Rng instance fully determines
// every draw, which the experiment runner relies on for reproducible CSVs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

ComplexMatrix random_complex_gaussian(Rng& rng, Eigen::Index n);

// Random skew-Hermitian direction rescaled to the requested operator norm.
SkewHermitian random_skew(Rng& rng, Eigen::Index n, double opnorm_target);

// Traceless variant (tangent to the special unitary group).
SkewHermitian random_traceless_skew(Rng& rng, Eigen::Index n,
                                    double opnorm_target);

// exp(x) for a random skew x with ||x||_inf drawn uniformly in
// [0, max_norm].
Unitary random_unitary(Rng& rng, Eigen::Index n, double max_norm);

// w * exp(x) with ||x||_inf uniform in [0, radius]: a point of B_inf[w, r].
Unitary random_in_ball(Rng& rng, const Unitary& w, double radius);

// Symmetry id - 2p for a random rank-m projection p.
Unitary random_symmetry(Rng& rng, Eigen::Index n, Eigen::Index rank);

}  // namespace unifinsler
