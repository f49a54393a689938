#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixlens/classifier.hpp"
#include "mixlens/dataset.hpp"
#include "mixlens/text.hpp"

namespace mixlens {

struct TrainingHyper {
  int epochs = 300;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

struct TrainingMeta {
  std::uint64_t seed = 0;
  int epochs = 0;
  double learning_rate = 0.0;
  double l2 = 0.0;
  double final_loss = 0.0;
  /// Digest of the run configuration that produced the model, if any.
  std::string config_digest;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

/// Multinomial logistic regression over bag-of-words counts. Tokens outside
/// the feature vocabulary contribute nothing.
class ReferenceModel {
 public:
  static constexpr int kFormatVersion = 1;

  /// `features` must be duplicate-free; `weights` is row-major
  /// [class_names.size() x features.size()].
  ReferenceModel(std::vector<std::string> class_names, std::vector<std::string> features,
                 std::vector<double> weights, std::vector<double> bias, TrainingMeta meta = {});

  /// All-zero model over the given classes and features.
  static ReferenceModel zeros(std::vector<std::string> class_names,
                              std::vector<std::string> features);

  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::vector<std::string>& features() const noexcept { return features_; }
  std::size_t num_classes() const noexcept { return class_names_.size(); }
  std::size_t num_features() const noexcept { return features_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& bias() const noexcept { return bias_; }
  const TrainingMeta& meta() const noexcept { return meta_; }

  /// Weight of `lookup_form` toward class `cls`; zero for unknown tokens.
  double weight(std::size_t cls, std::string_view lookup_form) const;
  void set_weight(std::size_t cls, std::string_view lookup_form, double value);
  void set_bias(std::size_t cls, double value);

  std::vector<double> logits(std::span<const Token> tokens) const;
  ProbDist predict(std::span<const Token> tokens) const;
  ProbDist predict(std::string_view text) const;

  std::string to_json() const;
  static ReferenceModel from_json(std::string_view json);
  void save(const std::filesystem::path& path) const;
  static ReferenceModel load(const std::filesystem::path& path);

  friend bool operator==(const ReferenceModel&, const ReferenceModel&) = default;
  friend ReferenceModel train_reference(const Dataset& data, const TrainingHyper& hyper);

 private:
  std::vector<std::string> class_names_;
  std::vector<std::string> features_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  TrainingMeta meta_;
};

/// Deterministic full-batch gradient descent from zero weights. Features are
/// the sorted distinct lookup forms of the labeled training instances.
ReferenceModel train_reference(const Dataset& data, const TrainingHyper& hyper = {});

/// Fraction of labeled instances whose argmax matches the label.
double training_accuracy(const ReferenceModel& model, const Dataset& data);

class ReferenceClassifier final : public Classifier {
 public:
  static constexpr std::size_t kDefaultBatchLimit = 64;

  explicit ReferenceClassifier(std::shared_ptr<const ReferenceModel> model,
                               std::size_t batch_limit = kDefaultBatchLimit);
  explicit ReferenceClassifier(ReferenceModel model,
                               std::size_t batch_limit = kDefaultBatchLimit);

  ClassifierKind kind() const noexcept override { return ClassifierKind::reference; }
  const std::vector<std::string>& class_names() const noexcept override {
    return model_->class_names();
  }
  std::size_t batch_limit() const noexcept override { return batch_limit_; }
  std::vector<ProbDist> predict_proba(std::span<const std::string> texts) override;

  const ReferenceModel& model() const noexcept { return *model_; }

 private:
  std::shared_ptr<const ReferenceModel> model_;
  std::size_t batch_limit_;
};

}  // namespace mixlens
