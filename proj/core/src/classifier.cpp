#include "mixlens/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixlens/errors.hpp"
#include "mixlens/util/parallel.hpp"

namespace mixlens {

std::vector<ProbDist> predict_all(Classifier& classifier, std::span<const std::string> texts,
                                  unsigned jobs) {
  std::vector<ProbDist> out(texts.size());
  const std::size_t limit = std::max<std::size_t>(1, classifier.batch_limit());
  const std::size_t chunks = (texts.size() + limit - 1) / limit;

  util::parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::size_t begin = c * limit;
    const std::size_t end = std::min(texts.size(), begin + limit);
    std::vector<ProbDist> part;
    try {
      part = classifier.predict_proba(texts.subspan(begin, end - begin));
    } catch (const PredictionError& e) {
      std::vector<std::size_t> failed;
      for (std::size_t i : e.failed_indices()) failed.push_back(begin + i);
      throw PredictionError(e.what(), std::move(failed));
    } catch (const ProtocolError& e) {
      std::vector<std::size_t> failed;
      for (std::size_t i : e.failed_indices()) failed.push_back(begin + i);
      throw ProtocolError(e.what(), std::move(failed));
    }
    if (part.size() != end - begin) {
      std::vector<std::size_t> failed(end - begin);
      std::iota(failed.begin(), failed.end(), begin);
      throw PredictionError("classifier returned " + std::to_string(part.size()) +
                                " distributions for " + std::to_string(end - begin) + " texts",
                            std::move(failed));
    }
    std::move(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
  });
  return out;
}

ProbDist predict_one(Classifier& classifier, const std::string& text) {
  return predict_all(classifier, std::span<const std::string>(&text, 1)).front();
}

std::size_t argmax_class(const ProbDist& probs) {
  if (probs.empty()) throw DomainError("argmax of an empty distribution");
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

bool is_valid_distribution(const ProbDist& probs, double tolerance) {
  if (probs.empty()) return false;
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace mixlens
