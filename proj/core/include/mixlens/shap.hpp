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

struct ShapConfig {
  /// Maximum number of coalition evaluations besides the empty and full ones.
  std::size_t budget = 2048;
  /// Enumerate every coalition when 2^m - 2 <= threshold; defaults to budget.
  std::optional<std::size_t> exact_threshold;
  std::uint64_t seed = 0;
  TargetSpace target = TargetSpace::probability;

  void validate() const;
};

/// (m-1) / (C(m,k) k (m-k)) for 1 <= k <= m-1; DomainError otherwise.
double shapley_kernel_weight(std::size_t m, std::size_t k);

struct CoalitionPlan {
  std::vector<Mask> masks;
  /// Regression weight per mask: the Shapley kernel in exact mode, uniform
  /// when sampled (the kernel is already the sampling law).
  std::vector<double> weights;
  bool exact = false;
};

CoalitionPlan enumerate_or_sample_coalitions(std::size_t m, const ShapConfig& cfg);

struct ConstrainedSolution {
  std::vector<double> phi;
  bool degenerate = false;
};

/// Minimizes sum_S w_S (v(S) - phi0 - sum_{i in S} phi_i)^2 with phi0 fixed
/// to v_empty and sum phi = v_full - v_empty, by eliminating the last
/// attribution. `m` is the mask length.
ConstrainedSolution solve_constrained_wls(std::size_t m, std::span<const Mask> masks,
                                          std::span<const double> values,
                                          std::span<const double> kernel_weights,
                                          double v_empty, double v_full);

inline constexpr std::size_t kMaxExactShapleyTypes = 12;

/// Brute-force Shapley values over all 2^m coalitions, in token-type order.
/// Throws SizeError when m exceeds kMaxExactShapleyTypes.
std::vector<double> exact_shapley(Classifier& classifier, const Instance& instance,
                                  TargetSpace target = TargetSpace::probability);

Explanation explain_shap(Classifier& classifier, const Instance& instance, const ShapConfig& cfg);

}  // namespace mixlens
