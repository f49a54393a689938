#include "mixlens/oracle.hpp"

#include <cmath>

#include "mixlens/errors.hpp"

namespace mixlens {

double oracle_log_odds_delta(const ReferenceModel& model, const Instance& instance,
                             const TokenSet& targets) {
  if (model.num_classes() != 2) {
    throw DomainError("log-odds oracle supports binary models only (got " +
                      std::to_string(model.num_classes()) + " classes)");
  }
  const std::size_t pred = argmax_class(model.predict(instance.tokens));
  const std::size_t other = 1 - pred;
  double delta = 0.0;
  for (const Token& t : instance.tokens) {
    if (t.lookup_form.empty() || !targets.contains(t.lookup_form)) continue;
    delta += model.weight(pred, t.lookup_form) - model.weight(other, t.lookup_form);
  }
  return std::abs(delta);
}

}  // namespace mixlens
