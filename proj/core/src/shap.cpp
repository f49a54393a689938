#include "mixlens/shap.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>

#include "linalg.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/util/hash.hpp"
#include "mixlens/util/random.hpp"

namespace mixlens {
namespace {

double binomial(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

std::size_t exact_limit(const ShapConfig& cfg) { return cfg.exact_threshold.value_or(cfg.budget); }

bool fits_exact(std::size_t m, const ShapConfig& cfg) {
  if (m >= 63) return false;
  return (std::uint64_t{1} << m) - 2 <= exact_limit(cfg);
}

std::string shap_digest(const ShapConfig& cfg) {
  const std::string canon =
      "shap;budget=" + std::to_string(cfg.budget) + ";exact_threshold=" +
      (cfg.exact_threshold ? std::to_string(*cfg.exact_threshold) : "budget") +
      ";seed=" + std::to_string(cfg.seed) +
      ";target=" + (cfg.target == TargetSpace::logit ? "logit" : "probability");
  return util::to_hex(util::fnv1a64(canon));
}

Mask mask_from_bits(std::uint64_t bits, std::size_t m) {
  Mask mask(m, 0);
  for (std::size_t i = 0; i < m; ++i) mask[i] = static_cast<std::uint8_t>((bits >> i) & 1U);
  return mask;
}

}  // namespace

void ShapConfig::validate() const {
  if (budget < 2) throw InputError("SHAP budget must be at least 2");
}

double shapley_kernel_weight(std::size_t m, std::size_t k) {
  if (k == 0 || k >= m) {
    throw DomainError("Shapley kernel is defined for 1 <= k <= m-1 (m=" + std::to_string(m) +
                      ", k=" + std::to_string(k) + ")");
  }
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  return (md - 1.0) / (binomial(m, k) * kd * (md - kd));
}

CoalitionPlan enumerate_or_sample_coalitions(std::size_t m, const ShapConfig& cfg) {
  if (m == 0) throw DomainError("coalitions need at least one token type");
  CoalitionPlan plan;
  if (m == 1) {
    plan.exact = true;
    return plan;
  }

  if (fits_exact(m, cfg)) {
    plan.exact = true;
    const std::uint64_t total = std::uint64_t{1} << m;
    plan.masks.reserve(total - 2);
    plan.weights.reserve(total - 2);
    for (std::uint64_t bits = 1; bits + 1 < total; ++bits) {
      Mask mask = mask_from_bits(bits, m);
      plan.weights.push_back(shapley_kernel_weight(m, count_active(mask)));
      plan.masks.push_back(std::move(mask));
    }
    return plan;
  }

  // Coalition size drawn with probability proportional to the total kernel
  // mass of that size, C(m,k) * kernel(m,k) = (m-1) / (k (m-k)).
  std::vector<double> size_mass(m - 1);
  for (std::size_t k = 1; k < m; ++k) {
    size_mass[k - 1] = static_cast<double>(m - 1) / static_cast<double>(k * (m - k));
  }
  util::Rng rng(cfg.seed);
  plan.masks.reserve(cfg.budget);
  for (std::size_t s = 0; s < cfg.budget; ++s) {
    const std::size_t k = 1 + rng.categorical(size_mass);
    Mask mask(m, 0);
    for (std::size_t i : rng.subset(m, k)) mask[i] = 1;
    plan.masks.push_back(std::move(mask));
  }
  plan.weights.assign(plan.masks.size(), 1.0);
  return plan;
}

ConstrainedSolution solve_constrained_wls(std::size_t m, std::span<const Mask> masks,
                                          std::span<const double> values,
                                          std::span<const double> kernel_weights, double v_empty,
                                          double v_full) {
  if (m == 0) throw DomainError("constrained regression needs at least one feature");
  if (values.size() != masks.size() || kernel_weights.size() != masks.size()) {
    throw InputError("masks, values and weights must have equal length");
  }
  if (!std::isfinite(v_empty) || !std::isfinite(v_full)) {
    throw InputError("coalition values must be finite");
  }
  const double delta = v_full - v_empty;
  ConstrainedSolution out;
  if (m == 1) {
    out.phi = {delta};
    return out;
  }

  // phi_last = delta - sum_{j < last} phi_j, so each row regresses
  // v(S) - v_empty - z_last * delta on (z_j - z_last).
  const std::size_t p = m - 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  Eigen::VectorXd x(static_cast<Eigen::Index>(p));
  for (std::size_t r = 0; r < masks.size(); ++r) {
    const Mask& mask = masks[r];
    if (mask.size() != m) throw InputError("mask length does not match m");
    if (!std::isfinite(values[r])) throw InputError("coalition values must be finite");
    const double last = mask[p];
    for (std::size_t j = 0; j < p; ++j) x(static_cast<Eigen::Index>(j)) = mask[j] - last;
    const double target = values[r] - v_empty - last * delta;
    const double w = kernel_weights[r];
    a.noalias() += w * x * x.transpose();
    b.noalias() += (w * target) * x;
  }

  const Eigen::VectorXd head = detail::solve_symmetric(a, b, out.degenerate);
  out.phi.assign(head.data(), head.data() + head.size());
  out.phi.push_back(delta - head.sum());
  return out;
}

std::vector<double> exact_shapley(Classifier& classifier, const Instance& instance,
                                  TargetSpace target) {
  const MaskedInstance masked(instance);
  const std::size_t m = masked.num_types();
  if (m == 0) throw InputError("instance '" + instance.id + "' has no token types");
  if (m > kMaxExactShapleyTypes) {
    throw SizeError("exact Shapley values need m <= " + std::to_string(kMaxExactShapleyTypes) +
                    " token types (instance '" + instance.id + "' has " + std::to_string(m) + ")");
  }

  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<Mask> masks;
  masks.reserve(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) masks.push_back(mask_from_bits(bits, m));
  CoalitionValue value(classifier, masked, target);
  const std::vector<double> v = value.evaluate(masks);

  // |S|! (m - |S| - 1)! / m!
  std::vector<double> coeff(m);
  for (std::size_t s = 0; s < m; ++s) {
    coeff[s] = 1.0 / (static_cast<double>(m) * binomial(m - 1, s));
  }

  std::vector<double> phi(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t s = 0; s < total; ++s) {
      if (s & bit) continue;
      phi[i] += coeff[static_cast<std::size_t>(std::popcount(s))] * (v[s | bit] - v[s]);
    }
  }
  return phi;
}

Explanation explain_shap(Classifier& classifier, const Instance& instance, const ShapConfig& cfg) {
  cfg.validate();
  const MaskedInstance masked(instance);
  const std::size_t m = masked.num_types();
  if (m == 0) throw InputError("instance '" + instance.id + "' has no token types to explain");

  ShapConfig local = cfg;
  local.seed = util::derive_seed(cfg.seed, instance.id);
  const CoalitionPlan plan = enumerate_or_sample_coalitions(m, local);

  CoalitionValue value(classifier, masked, cfg.target);
  const double v_full = value.full_value();
  const double v_empty = value.evaluate(Mask(m, 0));
  const std::vector<double> values = value.evaluate(plan.masks);
  const ConstrainedSolution sol =
      solve_constrained_wls(m, plan.masks, values, plan.weights, v_empty, v_full);

  Explanation expl;
  expl.instance_id = instance.id;
  expl.text = masked.text_for(full_mask(m));
  expl.explainer = ExplainerKind::shap;
  expl.predicted_index = value.predicted_index();
  expl.predicted_class = classifier.class_names().at(expl.predicted_index);
  expl.original_probs = value.original_probs();
  for (std::size_t i = 0; i < m; ++i) expl.weights.emplace(masked.types()[i], sol.phi[i]);
  expl.intercept = v_empty;
  const double total = std::accumulate(sol.phi.begin(), sol.phi.end(), 0.0);
  expl.diagnostics.efficiency_gap = std::abs(total + v_empty - v_full);
  expl.diagnostics.exact_mode = plan.exact;
  expl.diagnostics.degenerate = sol.degenerate;
  expl.diagnostics.evaluations = value.queries();
  expl.diagnostics.seed = local.seed;
  expl.diagnostics.target = cfg.target;
  expl.config_digest = shap_digest(cfg);
  return expl;
}

}  // namespace mixlens
