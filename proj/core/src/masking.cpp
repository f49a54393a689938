#include "mixlens/masking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mixlens/errors.hpp"

namespace mixlens {

Mask full_mask(std::size_t m) { return Mask(m, 1); }

std::size_t count_active(const Mask& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

MaskedInstance::MaskedInstance(const Instance& instance)
    : instance_(&instance), types_(token_types(instance.tokens)) {}

std::string MaskedInstance::text_for(const Mask& mask) const {
  if (mask.size() != types_.size()) throw DomainError("mask length does not match type count");
  TokenSet removed;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (mask[i] == 0) removed.insert(types_[i]);
  }
  return delete_tokens(instance_->tokens, removed);
}

CoalitionValue::CoalitionValue(Classifier& classifier, const MaskedInstance& masked,
                               TargetSpace target)
    : classifier_(&classifier), masked_(&masked), target_(target) {
  original_ = predict_one(classifier, masked.text_for(full_mask(masked.num_types())));
  ++queries_;
  predicted_ = argmax_class(original_);
  full_value_ = value_of(original_);
}

double CoalitionValue::value_of(const ProbDist& p) const {
  if (target_ == TargetSpace::probability) return p[predicted_];
  // Sum the other classes directly so 1 - p loses no precision.
  double rest = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (c != predicted_) rest += p[c];
  }
  constexpr double kFloor = 1e-300;
  return std::log(std::max(p[predicted_], kFloor)) - std::log(std::max(rest, kFloor));
}

std::vector<double> CoalitionValue::evaluate(std::span<const Mask> masks) {
  std::vector<std::string> unique_texts;
  std::map<std::string, std::size_t> slot;
  std::vector<std::size_t> which(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    std::string text = masked_->text_for(masks[i]);
    const auto [it, inserted] = slot.emplace(std::move(text), unique_texts.size());
    if (inserted) unique_texts.push_back(it->first);
    which[i] = it->second;
  }

  const std::vector<ProbDist> probs = predict_all(*classifier_, unique_texts);
  queries_ += unique_texts.size();

  std::vector<double> values(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) values[i] = value_of(probs[which[i]]);
  return values;
}

double CoalitionValue::evaluate(const Mask& mask) {
  return evaluate(std::span<const Mask>(&mask, 1)).front();
}

}  // namespace mixlens
