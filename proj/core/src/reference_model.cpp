#include "mixlens/reference_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mixlens/errors.hpp"

namespace mixlens {
namespace {

using json = nlohmann::json;

constexpr const char* kFormatName = "mixlens-reference-model";

using SparseRow = std::vector<std::pair<std::size_t, double>>;

SparseRow count_features(std::span<const Token> tokens,
                         const std::map<std::string, std::size_t, std::less<>>& index) {
  std::map<std::size_t, double> counts;
  for (const Token& t : tokens) {
    if (t.lookup_form.empty()) continue;
    const auto it = index.find(t.lookup_form);
    if (it != index.end()) counts[it->second] += 1.0;
  }
  return {counts.begin(), counts.end()};
}

double log_sum_exp(std::span<const double> z) {
  const double peak = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - peak);
  return peak + std::log(s);
}

}  // namespace

ReferenceModel::ReferenceModel(std::vector<std::string> class_names,
                               std::vector<std::string> features, std::vector<double> weights,
                               std::vector<double> bias, TrainingMeta meta)
    : class_names_(std::move(class_names)),
      features_(std::move(features)),
      weights_(std::move(weights)),
      bias_(std::move(bias)),
      meta_(std::move(meta)) {
  if (class_names_.empty()) throw InputError("reference model needs at least one class");
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!index_.emplace(features_[i], i).second) {
      throw InputError("duplicate feature '" + features_[i] + "'");
    }
  }
  if (weights_.size() != class_names_.size() * features_.size()) {
    throw InputError("weight matrix does not match classes x features");
  }
  if (bias_.size() != class_names_.size()) throw InputError("bias does not match class count");
}

ReferenceModel ReferenceModel::zeros(std::vector<std::string> class_names,
                                     std::vector<std::string> features) {
  const std::size_t k = class_names.size();
  const std::size_t f = features.size();
  return ReferenceModel(std::move(class_names), std::move(features), std::vector<double>(k * f),
                        std::vector<double>(k));
}

double ReferenceModel::weight(std::size_t cls, std::string_view lookup_form) const {
  const auto it = index_.find(lookup_form);
  if (it == index_.end()) return 0.0;
  return weights_.at(cls * features_.size() + it->second);
}

void ReferenceModel::set_weight(std::size_t cls, std::string_view lookup_form, double value) {
  const auto it = index_.find(lookup_form);
  if (it == index_.end()) throw InputError("unknown feature '" + std::string(lookup_form) + "'");
  weights_.at(cls * features_.size() + it->second) = value;
}

void ReferenceModel::set_bias(std::size_t cls, double value) { bias_.at(cls) = value; }

std::vector<double> ReferenceModel::logits(std::span<const Token> tokens) const {
  std::vector<double> z = bias_;
  const SparseRow row = count_features(tokens, index_);
  for (std::size_t c = 0; c < z.size(); ++c) {
    const double* w = weights_.data() + c * features_.size();
    for (const auto& [j, count] : row) z[c] += w[j] * count;
  }
  return z;
}

ProbDist ReferenceModel::predict(std::span<const Token> tokens) const {
  const std::vector<double> z = logits(tokens);
  return softmax(z);
}

ProbDist ReferenceModel::predict(std::string_view text) const { return predict(tokenize(text)); }

std::string ReferenceModel::to_json() const {
  json weights = json::array();
  for (std::size_t c = 0; c < class_names_.size(); ++c) {
    const auto first = weights_.begin() + static_cast<std::ptrdiff_t>(c * features_.size());
    weights.push_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(features_.size())));
  }
  json doc = {
      {"format", kFormatName},
      {"format_version", kFormatVersion},
      {"class_names", class_names_},
      {"features", features_},
      {"weights", std::move(weights)},
      {"bias", bias_},
      {"training",
       {{"seed", meta_.seed},
        {"epochs", meta_.epochs},
        {"learning_rate", meta_.learning_rate},
        {"l2", meta_.l2},
        {"final_loss", meta_.final_loss}}},
  };
  if (!meta_.config_digest.empty()) doc["config_digest"] = meta_.config_digest;
  return doc.dump(1) + "\n";
}

ReferenceModel ReferenceModel::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != kFormatName) throw FormatError("not a reference model file");
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw FormatError("unsupported reference model format_version " + std::to_string(version));
    }
    auto classes = doc.at("class_names").get<std::vector<std::string>>();
    auto features = doc.at("features").get<std::vector<std::string>>();
    std::vector<double> weights;
    weights.reserve(classes.size() * features.size());
    for (const auto& row : doc.at("weights")) {
      const auto values = row.get<std::vector<double>>();
      if (values.size() != features.size()) throw FormatError("weight row has wrong length");
      weights.insert(weights.end(), values.begin(), values.end());
    }
    TrainingMeta meta;
    const json& t = doc.at("training");
    meta.seed = t.at("seed").get<std::uint64_t>();
    meta.epochs = t.at("epochs").get<int>();
    meta.learning_rate = t.at("learning_rate").get<double>();
    meta.l2 = t.at("l2").get<double>();
    meta.final_loss = t.at("final_loss").get<double>();
    meta.config_digest = doc.value("config_digest", "");
    return ReferenceModel(std::move(classes), std::move(features), std::move(weights),
                          doc.at("bias").get<std::vector<double>>(), std::move(meta));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed reference model: ") + e.what());
  } catch (const InputError& e) {
    throw FormatError(std::string("inconsistent reference model: ") + e.what());
  }
}

void ReferenceModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model " + path.string());
  out << to_json();
  if (!out) throw IoError("error writing model " + path.string());
}

ReferenceModel ReferenceModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

ReferenceModel train_reference(const Dataset& data, const TrainingHyper& hyper) {
  if (hyper.epochs < 0) throw TrainingError("epochs must be non-negative");
  if (!(hyper.learning_rate > 0.0) || !std::isfinite(hyper.learning_rate)) {
    throw TrainingError("learning_rate must be positive and finite");
  }
  if (!(hyper.l2 >= 0.0) || !std::isfinite(hyper.l2)) {
    throw TrainingError("l2 must be non-negative and finite");
  }
  const std::size_t k = data.class_names.size();
  if (k < 2) throw TrainingError("training needs at least two classes");

  std::vector<const Instance*> labeled;
  std::vector<std::size_t> targets;
  std::vector<std::size_t> per_class(k, 0);
  TokenSet vocab;
  for (const Instance& inst : data.instances) {
    if (!inst.label) continue;
    const auto cls = data.class_index(*inst.label);
    if (!cls) throw TrainingError("label '" + *inst.label + "' is not a declared class");
    labeled.push_back(&inst);
    targets.push_back(*cls);
    ++per_class[*cls];
    for (const Token& t : inst.tokens) {
      if (!t.lookup_form.empty()) vocab.insert(t.lookup_form);
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (per_class[c] == 0) {
      throw TrainingError("class '" + data.class_names[c] + "' has no labeled instances");
    }
  }

  ReferenceModel model =
      ReferenceModel::zeros(data.class_names, std::vector<std::string>(vocab.begin(), vocab.end()));
  const std::size_t f = model.num_features();
  std::vector<SparseRow> rows;
  rows.reserve(labeled.size());
  for (const Instance* inst : labeled) rows.push_back(count_features(inst->tokens, model.index_));

  const double inv_n = 1.0 / static_cast<double>(rows.size());
  std::vector<double> grad_w(k * f);
  std::vector<double> grad_b(k);
  std::vector<double> z(k);

  auto forward = [&](bool accumulate) {
    double loss = 0.0;
    if (accumulate) {
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        double acc = model.bias_[c];
        const double* w = model.weights_.data() + c * f;
        for (const auto& [j, count] : rows[r]) acc += w[j] * count;
        z[c] = acc;
      }
      const double lse = log_sum_exp(z);
      loss += lse - z[targets[r]];
      if (!accumulate) continue;
      for (std::size_t c = 0; c < k; ++c) {
        const double residual = std::exp(z[c] - lse) - (c == targets[r] ? 1.0 : 0.0);
        grad_b[c] += residual;
        double* g = grad_w.data() + c * f;
        for (const auto& [j, count] : rows[r]) g[j] += residual * count;
      }
    }
    double penalty = 0.0;
    for (double w : model.weights_) penalty += w * w;
    return loss * inv_n + 0.5 * hyper.l2 * penalty;
  };

  auto diverged = [&](int epoch, double loss) {
    const std::string name = hyper.l2 * hyper.learning_rate >= 2.0 ? "l2" : "learning_rate";
    return DivergenceError(name, "training diverged at epoch " + std::to_string(epoch) +
                                     " (loss " + std::to_string(loss) + "); reduce " + name);
  };

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double loss = forward(true);
    if (!std::isfinite(loss)) throw diverged(epoch, loss);
    for (std::size_t i = 0; i < model.weights_.size(); ++i) {
      model.weights_[i] -= hyper.learning_rate * (grad_w[i] * inv_n + hyper.l2 * model.weights_[i]);
    }
    for (std::size_t c = 0; c < k; ++c) model.bias_[c] -= hyper.learning_rate * grad_b[c] * inv_n;
  }
  const double final_loss = forward(false);
  if (!std::isfinite(final_loss)) throw diverged(hyper.epochs, final_loss);

  model.meta_ = TrainingMeta{hyper.seed, hyper.epochs, hyper.learning_rate, hyper.l2, final_loss, {}};
  return model;
}

double training_accuracy(const ReferenceModel& model, const Dataset& data) {
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const Instance& inst : data.instances) {
    if (!inst.label) continue;
    ++total;
    const std::size_t predicted = argmax_class(model.predict(inst.tokens));
    if (model.class_names()[predicted] == *inst.label) ++correct;
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

ReferenceClassifier::ReferenceClassifier(std::shared_ptr<const ReferenceModel> model,
                                         std::size_t batch_limit)
    : model_(std::move(model)), batch_limit_(batch_limit) {
  if (!model_) throw InputError("null reference model");
  if (batch_limit_ == 0) throw InputError("batch_limit must be positive");
}

ReferenceClassifier::ReferenceClassifier(ReferenceModel model, std::size_t batch_limit)
    : ReferenceClassifier(std::make_shared<const ReferenceModel>(std::move(model)), batch_limit) {}

std::vector<ProbDist> ReferenceClassifier::predict_proba(std::span<const std::string> texts) {
  if (texts.size() > batch_limit_) {
    throw InputError("batch of " + std::to_string(texts.size()) + " exceeds batch_limit " +
                     std::to_string(batch_limit_));
  }
  std::vector<ProbDist> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(model_->predict(t));
  return out;
}

}  // namespace mixlens
