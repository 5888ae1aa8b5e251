#pragma once
/**
 * @file rng.hpp
 * @brief Counter-based SplitMix64 generator.
 *
 * Draw k of stream s under seed x is splitmix64(key(x, s) + (k + 1) * 0x9E3779B97F4A7C15),
 * so outputs depend only on (seed, stream, k) and are identical on every platform.
 * Gaussians use the cosine branch of Box-Muller on two consecutive uniforms.
 */

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>

namespace conebill {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64(seed ^ splitmix64(stream + kGamma))) {}

  std::uint64_t next_u64() { return splitmix64(key_ + (++counter_) * kGamma); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index dim) {
    Eigen::VectorXd g(dim);
    for (Eigen::Index i = 0; i < dim; ++i) g(i) = gaussian();
    return g;
  }

  /// Uniform on the unit sphere S^{dim-1}.
  Eigen::VectorXd unit_vector(Eigen::Index dim) {
    while (true) {
      Eigen::VectorXd g = gaussian_vector(dim);
      const double norm = g.norm();
      if (norm > 1e-12) return g / norm;
    }
  }

  /// Uniform in the closed unit ball of R^dim.
  Eigen::VectorXd in_unit_ball(Eigen::Index dim) {
    Eigen::VectorXd dir = unit_vector(dim);
    return dir * std::pow(uniform(), 1.0 / static_cast<double>(dim));
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace conebill
