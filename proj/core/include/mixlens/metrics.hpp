#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixlens/classifier.hpp"
#include "mixlens/dataset.hpp"
#include "mixlens/explanation.hpp"
#include "mixlens/vocabulary.hpp"

namespace mixlens {

inline constexpr double kDefaultEpsilon = 1e-6;

/// ln(p' / (1 - p')) with p' = clamp(p, eps, 1 - eps). DomainError when p is
/// outside [0, 1].
double log_odds(double p, double epsilon = kDefaultEpsilon);

enum class RankMode { signed_weight, absolute };

using TokenFilter = std::function<bool(const Token&)>;

/// Lookup forms ordered by weight (descending), ties by first position in
/// the instance, then lexicographically. Only tokens that have a weight and
/// pass `scope` are eligible. Returns min(n, eligible) items.
std::vector<std::string> top_n_polarizing(const Explanation& expl, const Instance& instance,
                                          std::size_t n, const TokenFilter& scope = {},
                                          RankMode rank = RankMode::signed_weight);

enum class MetricVariant { sentence, model, codemixed, random_baseline };

std::string_view to_string(MetricVariant variant);
MetricVariant parse_variant(std::string_view name);

struct EvalOptions {
  double epsilon = kDefaultEpsilon;
  RankMode rank = RankMode::signed_weight;
  unsigned jobs = 1;
};

struct MetricResult {
  double value = 0.0;
  std::size_t num_instances = 0;
  /// Instances with fewer than n eligible tokens.
  std::size_t num_degenerate = 0;
  /// |log_odds_i - log_odds_f| per instance, in dataset order.
  std::vector<double> contributions;
  std::vector<TokenSet> deleted;
};

/// Deletes each instance's top-n polarizing words and averages the absolute
/// change in the originally predicted class's log-odds. Instances are
/// matched to explanations by id.
MetricResult maelosd_sentence(Classifier& classifier, std::span<const Explanation> explanations,
                              const Dataset& data, std::size_t n, const EvalOptions& options = {});

/// Same, restricted to code-mixed tokens.
MetricResult maelosd_codemixed(Classifier& classifier, std::span<const Explanation> explanations,
                               const Dataset& data, const Vocabulary& vocab, std::size_t n,
                               const EvalOptions& options = {});

enum class GlobalMode { mean_signed, mean_abs };

std::string_view to_string(GlobalMode mode);
GlobalMode default_global_mode(ExplainerKind explainer);

struct GlobalWeights {
  std::map<std::string, double, std::less<>> per_token;
  std::map<std::string, std::size_t, std::less<>> support;
  GlobalMode mode = GlobalMode::mean_signed;
};

/// Averages each token's weight over the explanations that contain it.
GlobalWeights aggregate_global(std::span<const Explanation> explanations, GlobalMode mode);

/// Per instance, deletes the n globally highest-weighted tokens among those
/// present in the instance. The class is the classifier's argmax on the
/// original text.
MetricResult maelosd_model(Classifier& classifier, const GlobalWeights& global,
                           const Dataset& data, std::size_t n, const EvalOptions& options = {});

/// Deletes n token types chosen uniformly per instance (seeded by id).
MetricResult random_deletion_baseline(Classifier& classifier, const Dataset& data, std::size_t n,
                                      std::uint64_t seed, const EvalOptions& options = {});

struct MetricCurve {
  MetricVariant variant = MetricVariant::sentence;
  std::string explainer;  ///< "lime", "shap" or "random"
  std::map<std::size_t, double> points;
  std::map<std::size_t, std::size_t> num_instances;
  std::map<std::size_t, std::size_t> num_degenerate;
};

}  // namespace mixlens
