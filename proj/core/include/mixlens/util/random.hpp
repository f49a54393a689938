#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace mixlens::util {

/// mt19937_64 with hand-rolled distributions, so sequences do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform real in [0, 1) with 53 random bits.
  double unit();

  /// Uniform k-subset of {0..n-1}, returned sorted.
  std::vector<std::size_t> subset(std::size_t n, std::size_t k);

  /// Index drawn with probability proportional to `weights`.
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mixlens::util
