#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mixlens/classifier.hpp"
#include "mixlens/dataset.hpp"
#include "mixlens/explanation.hpp"

namespace mixlens {

/// Presence mask over an instance's token types; 1 keeps the type.
using Mask = std::vector<std::uint8_t>;

Mask full_mask(std::size_t m);
std::size_t count_active(const Mask& mask);

/// Instance viewed as a set of interpretable features (its token types).
/// Tokens with an empty lookup form are never masked.
class MaskedInstance {
 public:
  explicit MaskedInstance(const Instance& instance);

  std::size_t num_types() const noexcept { return types_.size(); }
  const std::vector<std::string>& types() const noexcept { return types_; }
  const Instance& instance() const noexcept { return *instance_; }

  /// Text with every type whose mask bit is 0 deleted.
  std::string text_for(const Mask& mask) const;

 private:
  const Instance* instance_;
  std::vector<std::string> types_;
};

/// Coalition value function v(mask) = the predicted class's probability (or
/// log-odds) on the masked text. The predicted class is fixed by the
/// unmasked text. Identical texts are queried once.
class CoalitionValue {
 public:
  CoalitionValue(Classifier& classifier, const MaskedInstance& masked, TargetSpace target);

  std::size_t predicted_index() const noexcept { return predicted_; }
  const ProbDist& original_probs() const noexcept { return original_; }
  double full_value() const noexcept { return full_value_; }
  std::size_t queries() const noexcept { return queries_; }

  std::vector<double> evaluate(std::span<const Mask> masks);
  double evaluate(const Mask& mask);

  /// The target quantity of `probs` for the predicted class.
  double value_of(const ProbDist& probs) const;

 private:
  Classifier* classifier_;
  const MaskedInstance* masked_;
  TargetSpace target_;
  ProbDist original_;
  std::size_t predicted_ = 0;
  double full_value_ = 0.0;
  std::size_t queries_ = 0;
};

}  // namespace mixlens
