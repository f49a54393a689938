#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mixlens/classifier.hpp"
#include "mixlens/dataset.hpp"
#include "mixlens/explanation.hpp"
#include "mixlens/masking.hpp"

namespace mixlens {

struct LimeConfig {
  std::size_t num_samples = 1000;
  /// May be +infinity, which makes the kernel uniform.
  double kernel_width = 25.0;
  double ridge_lambda = 1.0;
  /// Keep only the k largest |weight| features and refit on them.
  std::optional<std::size_t> max_features;
  /// Master seed; each instance draws from derive_seed(seed, id).
  std::uint64_t seed = 0;
  /// Use all 2^m masks instead of sampling (m <= 20).
  bool exhaustive = false;
  TargetSpace target = TargetSpace::probability;

  void validate() const;
};

/// First mask is all ones. Each further mask picks a count k uniformly in
/// 1..m and switches off a uniform k-subset, so the empty mask can occur.
std::vector<Mask> sample_perturbations(std::size_t m, std::size_t num_samples, std::uint64_t seed);

/// All 2^m masks, bit i of the enumeration index mapping to position i,
/// ordered so the all-ones mask comes first.
std::vector<Mask> enumerate_masks(std::size_t m);

/// exp(-d^2 / width^2), d = 1 - sqrt(k/m) the cosine distance to the
/// all-ones mask (d = 1 for the empty mask).
double kernel_weight(const Mask& mask, double kernel_width);

struct SurrogateFit {
  std::vector<double> coefficients;
  double intercept = 0.0;
  /// Weighted coefficient of determination.
  double r2 = 0.0;
  bool degenerate = false;
};

/// Weighted ridge regression with an unpenalized intercept, solved through
/// the centred normal equations and an LDLT factorization. A singular
/// system falls back to the minimum-norm solution and sets `degenerate`.
SurrogateFit fit_local_surrogate(std::span<const Mask> masks, std::span<const double> targets,
                                 std::span<const double> sample_weights, double ridge_lambda);

/// Throws InputError for instances without token types.
Explanation explain_lime(Classifier& classifier, const Instance& instance, const LimeConfig& cfg);

}  // namespace mixlens
