#pragma once

#include "mixlens/dataset.hpp"
#include "mixlens/reference_model.hpp"
#include "mixlens/text.hpp"

namespace mixlens {

/// Closed-form |log_odds_i - log_odds_f| for a binary reference model: the
/// predicted-class log-odds moves by the sum, over every deleted occurrence,
/// of (w_pred,tok - w_other,tok). No probability clamping is applied.
/// Throws DomainError unless the model has exactly two classes.
double oracle_log_odds_delta(const ReferenceModel& model, const Instance& instance,
                             const TokenSet& targets);

}  // namespace mixlens
