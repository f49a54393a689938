#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mixlens {

/// Probability vector aligned with a classifier's class_names().
using ProbDist = std::vector<double>;

enum class ClassifierKind { reference, external };

/// Black-box text classifier. Implementations must be callable from several
/// threads at once; class_names() is fixed for the lifetime of the object.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ClassifierKind kind() const noexcept = 0;
  virtual const std::vector<std::string>& class_names() const noexcept = 0;
  virtual std::size_t batch_limit() const noexcept = 0;

  /// One distribution per text, in order. texts.size() must not exceed
  /// batch_limit(); use predict_all() for longer lists.
  virtual std::vector<ProbDist> predict_proba(std::span<const std::string> texts) = 0;
};

/// Splits `texts` into batch_limit() chunks, optionally predicting chunks
/// on `jobs` threads. On failure throws PredictionError whose indices refer
/// to positions in `texts`.
std::vector<ProbDist> predict_all(Classifier& classifier, std::span<const std::string> texts,
                                  unsigned jobs = 1);

ProbDist predict_one(Classifier& classifier, const std::string& text);

/// Highest-probability class; ties go to the lowest index.
std::size_t argmax_class(const ProbDist& probs);

/// Checks finiteness, range and normalization (sum within `tolerance` of 1).
bool is_valid_distribution(const ProbDist& probs, double tolerance = 1e-6);

std::vector<double> softmax(std::span<const double> logits);

}  // namespace mixlens
