#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "mixlens/lime.hpp"
#include "mixlens/masking.hpp"
#include "mixlens/reference_model.hpp"
#include "mixlens/shap.hpp"
#include "mixlens/text.hpp"

using namespace mixlens;

namespace {

const std::vector<std::string> kWords = {
    "great", "awesome", "terrible", "boring", "movie", "film",  "story", "songs", "acting", "yaar",
    "bahut", "accha",   "bekar",    "hai",    "kya",   "mast",  "plot",  "today", "really", "ending"};

std::string sentence(std::mt19937_64& rng, std::size_t words) {
  std::string s;
  for (std::size_t i = 0; i < words; ++i) s += (i ? " " : "") + kWords[rng() % kWords.size()];
  return s;
}

// Sentence with exactly m distinct words.
std::string distinct_sentence(std::size_t m) {
  std::string s;
  for (std::size_t i = 0; i < m; ++i) s += (i ? " " : "") + kWords[i % kWords.size()];
  return s;
}

const ReferenceModel& model() {
  static const ReferenceModel m = [] {
    std::mt19937_64 rng(1);
    Dataset data;
    data.class_names = {"negative", "positive"};
    for (int i = 0; i < 200; ++i) {
      const bool pos = i % 2 == 0;
      const std::string text = sentence(rng, 6) + (pos ? " great" : " terrible");
      data.instances.push_back(Instance::make(std::to_string(i), text, pos ? "positive" : "negative"));
    }
    return train_reference(data);
  }();
  return m;
}

void BM_Tokenize(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const std::string text = sentence(rng, 40) + " !!! Accha, ekdum mast.";
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
}
BENCHMARK(BM_Tokenize);

void BM_ReferencePredict(benchmark::State& state) {
  ReferenceClassifier clf(model());
  std::mt19937_64 rng(3);
  std::vector<std::string> texts;
  for (int i = 0; i < 64; ++i) texts.push_back(sentence(rng, 10));
  for (auto _ : state) benchmark::DoNotOptimize(clf.predict_proba(texts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_ReferencePredict);

void BM_FitLocalSurrogate(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto masks = sample_perturbations(m, 1000, 4);
  std::vector<double> targets, weights;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Mask& mask : masks) {
    targets.push_back(u(rng));
    weights.push_back(kernel_weight(mask, 25.0));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_local_surrogate(masks, targets, weights, 1.0));
}
BENCHMARK(BM_FitLocalSurrogate)->Arg(5)->Arg(10)->Arg(20);

void BM_ExplainLime(benchmark::State& state) {
  ReferenceClassifier clf(model());
  const Instance inst = Instance::make("x", distinct_sentence(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(explain_lime(clf, inst, LimeConfig{}));
}
BENCHMARK(BM_ExplainLime)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ExplainShapExact(benchmark::State& state) {
  ReferenceClassifier clf(model());
  const Instance inst = Instance::make("x", distinct_sentence(10));
  for (auto _ : state) benchmark::DoNotOptimize(explain_shap(clf, inst, ShapConfig{}));
}
BENCHMARK(BM_ExplainShapExact)->Unit(benchmark::kMillisecond);

void BM_ExplainShapSampled(benchmark::State& state) {
  ReferenceClassifier clf(model());
  const Instance inst = Instance::make("x", distinct_sentence(16));
  for (auto _ : state) benchmark::DoNotOptimize(explain_shap(clf, inst, ShapConfig{}));
}
BENCHMARK(BM_ExplainShapSampled)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
