#include "mixlens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "mixlens/errors.hpp"
#include "mixlens/util/hash.hpp"
#include "mixlens/util/random.hpp"

namespace mixlens {
namespace {

struct Candidate {
  std::string form;
  double score;
  std::size_t position;
};

std::vector<std::string> rank_candidates(std::vector<Candidate> candidates, std::size_t n) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.position != b.position) return a.position < b.position;
    return a.form < b.form;
  });
  std::vector<std::string> out;
  const std::size_t take = std::min(n, candidates.size());
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(std::move(candidates[i].form));
  return out;
}

// One candidate per distinct lookup form, at its first position.
template <typename WeightMap>
std::vector<Candidate> collect_candidates(const WeightMap& weights, const Instance& instance,
                                          const TokenFilter& scope, RankMode rank) {
  std::vector<Candidate> out;
  TokenSet seen;
  for (const Token& t : instance.tokens) {
    if (t.lookup_form.empty() || seen.contains(t.lookup_form)) continue;
    seen.insert(t.lookup_form);
    const auto it = weights.find(t.lookup_form);
    if (it == weights.end()) continue;
    if (scope && !scope(t)) continue;
    const double score = rank == RankMode::absolute ? std::abs(it->second) : it->second;
    out.push_back({t.lookup_form, score, t.position});
  }
  return out;
}

struct DeletionPlan {
  TokenSet targets;
  std::optional<std::size_t> cls;  // nullopt: classifier argmax on the original text
  bool degenerate = false;
};

// Shared deletion fold: predicts original and deleted texts in one batched
// pass and averages |log_odds_i - log_odds_f| in dataset order.
MetricResult run_deletions(Classifier& classifier, const Dataset& data,
                           std::vector<DeletionPlan> plans, const EvalOptions& options) {
  std::vector<std::string> texts;
  std::map<std::string, std::size_t> slot;
  auto intern = [&](std::string text) {
    const auto [it, inserted] = slot.emplace(std::move(text), texts.size());
    if (inserted) texts.push_back(it->first);
    return it->second;
  };

  const std::size_t n_inst = data.instances.size();
  std::vector<std::size_t> original(n_inst);
  std::vector<std::size_t> deleted(n_inst);
  for (std::size_t i = 0; i < n_inst; ++i) {
    const auto& tokens = data.instances[i].tokens;
    original[i] = intern(delete_tokens(tokens, {}));
    deleted[i] = intern(delete_tokens(tokens, plans[i].targets));
  }

  const std::vector<ProbDist> probs = predict_all(classifier, texts, options.jobs);

  MetricResult result;
  result.num_instances = n_inst;
  result.contributions.resize(n_inst);
  result.deleted.resize(n_inst);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_inst; ++i) {
    const ProbDist& before = probs[original[i]];
    const ProbDist& after = probs[deleted[i]];
    const std::size_t cls = plans[i].cls.value_or(argmax_class(before));
    if (cls >= before.size()) throw InputError("predicted class index out of range");
    const double c = original[i] == deleted[i]
                         ? 0.0
                         : std::abs(log_odds(before[cls], options.epsilon) -
                                    log_odds(after[cls], options.epsilon));
    result.contributions[i] = c;
    result.deleted[i] = std::move(plans[i].targets);
    if (plans[i].degenerate) ++result.num_degenerate;
    sum += c;
  }
  result.value = n_inst == 0 ? 0.0 : sum / static_cast<double>(n_inst);
  return result;
}

std::map<std::string_view, const Explanation*> index_explanations(
    std::span<const Explanation> explanations, const Dataset& data, const Classifier& classifier) {
  std::map<std::string_view, const Explanation*> by_id;
  std::optional<ExplainerKind> kind;
  for (const Explanation& e : explanations) {
    if (kind && *kind != e.explainer) {
      throw InputError("explanations mix explainers (" + std::string(to_string(*kind)) + " and " +
                       std::string(to_string(e.explainer)) + ")");
    }
    kind = e.explainer;
    if (!by_id.emplace(e.instance_id, &e).second) {
      throw InputError("duplicate explanation for instance '" + e.instance_id + "'");
    }
  }
  for (const Instance& inst : data.instances) {
    const auto it = by_id.find(inst.id);
    if (it == by_id.end()) throw InputError("no explanation for instance '" + inst.id + "'");
    const auto& names = classifier.class_names();
    if (std::find(names.begin(), names.end(), it->second->predicted_class) == names.end()) {
      throw InputError("explanation for '" + inst.id + "' predicts unknown class '" +
                       it->second->predicted_class + "'");
    }
  }
  return by_id;
}

std::size_t class_position(const Classifier& classifier, const std::string& name) {
  const auto& names = classifier.class_names();
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

MetricResult local_variant(Classifier& classifier, std::span<const Explanation> explanations,
                           const Dataset& data, std::size_t n, const TokenFilter& scope,
                           const EvalOptions& options) {
  const auto by_id = index_explanations(explanations, data, classifier);
  std::vector<DeletionPlan> plans(data.instances.size());
  for (std::size_t i = 0; i < data.instances.size(); ++i) {
    const Instance& inst = data.instances[i];
    const Explanation& expl = *by_id.at(inst.id);
    const auto eligible = collect_candidates(expl.weights, inst, scope, options.rank);
    plans[i].degenerate = eligible.size() < n;
    for (auto& form : rank_candidates(eligible, n)) plans[i].targets.insert(std::move(form));
    plans[i].cls = class_position(classifier, expl.predicted_class);
  }
  return run_deletions(classifier, data, std::move(plans), options);
}

}  // namespace

double log_odds(double p, double epsilon) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("log_odds: probability outside [0, 1]");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("log_odds: epsilon must be in (0, 0.5)");
  const double q = std::clamp(p, epsilon, 1.0 - epsilon);
  return std::log(q / (1.0 - q));
}

std::vector<std::string> top_n_polarizing(const Explanation& expl, const Instance& instance,
                                          std::size_t n, const TokenFilter& scope, RankMode rank) {
  return rank_candidates(collect_candidates(expl.weights, instance, scope, rank), n);
}

std::string_view to_string(MetricVariant variant) {
  switch (variant) {
    case MetricVariant::sentence: return "sentence";
    case MetricVariant::model: return "model";
    case MetricVariant::codemixed: return "codemixed";
    case MetricVariant::random_baseline: return "random_baseline";
  }
  return "unknown";
}

MetricVariant parse_variant(std::string_view name) {
  if (name == "sentence") return MetricVariant::sentence;
  if (name == "model") return MetricVariant::model;
  if (name == "codemixed") return MetricVariant::codemixed;
  if (name == "random_baseline" || name == "random") return MetricVariant::random_baseline;
  throw InputError("unknown metric variant '" + std::string(name) + "'");
}

MetricResult maelosd_sentence(Classifier& classifier, std::span<const Explanation> explanations,
                              const Dataset& data, std::size_t n, const EvalOptions& options) {
  return local_variant(classifier, explanations, data, n, {}, options);
}

MetricResult maelosd_codemixed(Classifier& classifier, std::span<const Explanation> explanations,
                               const Dataset& data, const Vocabulary& vocab, std::size_t n,
                               const EvalOptions& options) {
  const TokenFilter scope = [&vocab](const Token& t) { return is_code_mixed(t, vocab); };
  return local_variant(classifier, explanations, data, n, scope, options);
}

std::string_view to_string(GlobalMode mode) {
  return mode == GlobalMode::mean_signed ? "mean_signed" : "mean_abs";
}

GlobalMode default_global_mode(ExplainerKind explainer) {
  return explainer == ExplainerKind::lime ? GlobalMode::mean_signed : GlobalMode::mean_abs;
}

GlobalWeights aggregate_global(std::span<const Explanation> explanations, GlobalMode mode) {
  if (explanations.empty()) throw InputError("global aggregation needs at least one explanation");
  GlobalWeights global;
  global.mode = mode;
  for (const Explanation& e : explanations) {
    for (const auto& [token, w] : e.weights) {
      global.per_token[token] += mode == GlobalMode::mean_abs ? std::abs(w) : w;
      ++global.support[token];
    }
  }
  for (auto& [token, total] : global.per_token) {
    total /= static_cast<double>(global.support.at(token));
  }
  return global;
}

MetricResult maelosd_model(Classifier& classifier, const GlobalWeights& global,
                           const Dataset& data, std::size_t n, const EvalOptions& options) {
  if (global.per_token.empty()) throw InputError("global weights are empty");
  std::vector<DeletionPlan> plans(data.instances.size());
  for (std::size_t i = 0; i < data.instances.size(); ++i) {
    const auto eligible = collect_candidates(global.per_token, data.instances[i], {}, options.rank);
    plans[i].degenerate = eligible.size() < n;
    for (auto& form : rank_candidates(eligible, n)) plans[i].targets.insert(std::move(form));
  }
  return run_deletions(classifier, data, std::move(plans), options);
}

MetricResult random_deletion_baseline(Classifier& classifier, const Dataset& data, std::size_t n,
                                      std::uint64_t seed, const EvalOptions& options) {
  std::vector<DeletionPlan> plans(data.instances.size());
  for (std::size_t i = 0; i < data.instances.size(); ++i) {
    const Instance& inst = data.instances[i];
    const std::vector<std::string> types = token_types(inst.tokens);
    const std::size_t k = std::min(n, types.size());
    plans[i].degenerate = types.size() < n;
    util::Rng rng(util::derive_seed(seed, inst.id));
    for (std::size_t j : rng.subset(types.size(), k)) plans[i].targets.insert(types[j]);
  }
  return run_deletions(classifier, data, std::move(plans), options);
}

}  // namespace mixlens
