#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mixlens/classifier.hpp"

namespace mixlens {

enum class ExplainerKind { lime, shap };

std::string_view to_string(ExplainerKind kind);
ExplainerKind parse_explainer(std::string_view name);

/// Which quantity of the predicted class an explainer attributes.
/// `logit` (log-odds) makes linear reference models exactly recoverable.
enum class TargetSpace { probability, logit };

struct FitDiagnostics {
  std::optional<double> surrogate_r2;    // lime
  std::optional<double> efficiency_gap;  // shap
  bool exact_mode = false;
  bool degenerate = false;  ///< Rank-deficient solve; minimum-norm answer used.
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
  TargetSpace target = TargetSpace::probability;

  friend bool operator==(const FitDiagnostics&, const FitDiagnostics&) = default;
};

struct Explanation {
  std::string instance_id;
  std::string text;
  ExplainerKind explainer = ExplainerKind::lime;
  std::string predicted_class;
  std::size_t predicted_index = 0;
  ProbDist original_probs;
  /// Signed contribution toward predicted_class, keyed by lookup form.
  std::map<std::string, double, std::less<>> weights;
  double intercept = 0.0;
  FitDiagnostics diagnostics;
  std::string config_digest;
  /// Free-form origin record (digests of model, data and explainer settings).
  std::map<std::string, std::string> provenance;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

}  // namespace mixlens
