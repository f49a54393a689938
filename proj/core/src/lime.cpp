#include "mixlens/lime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "linalg.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/util/hash.hpp"
#include "mixlens/util/random.hpp"

namespace mixlens {
namespace {

constexpr std::size_t kMaxExhaustiveTypes = 20;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string lime_digest(const LimeConfig& cfg) {
  std::string canon = "lime;num_samples=" + std::to_string(cfg.num_samples) +
                      ";kernel_width=" + format_double(cfg.kernel_width) +
                      ";ridge_lambda=" + format_double(cfg.ridge_lambda) + ";max_features=" +
                      (cfg.max_features ? std::to_string(*cfg.max_features) : "none") +
                      ";seed=" + std::to_string(cfg.seed) +
                      ";exhaustive=" + (cfg.exhaustive ? "1" : "0") +
                      ";target=" + (cfg.target == TargetSpace::logit ? "logit" : "probability");
  return util::to_hex(util::fnv1a64(canon));
}

}  // namespace

void LimeConfig::validate() const {
  if (num_samples < 1) throw InputError("num_samples must be at least 1");
  if (!(kernel_width > 0.0)) throw InputError("kernel_width must be positive");
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw InputError("ridge_lambda must be non-negative and finite");
  }
  if (max_features && *max_features == 0) throw InputError("max_features must be positive");
}

std::vector<Mask> sample_perturbations(std::size_t m, std::size_t num_samples, std::uint64_t seed) {
  if (m == 0) throw DomainError("sample_perturbations needs at least one token type");
  std::vector<Mask> masks;
  masks.reserve(num_samples);
  if (num_samples == 0) return masks;
  masks.push_back(full_mask(m));
  util::Rng rng(seed);
  while (masks.size() < num_samples) {
    const std::size_t removed = 1 + static_cast<std::size_t>(rng.below(m));
    Mask mask(m, 1);
    for (std::size_t i : rng.subset(m, removed)) mask[i] = 0;
    masks.push_back(std::move(mask));
  }
  return masks;
}

std::vector<Mask> enumerate_masks(std::size_t m) {
  if (m > kMaxExhaustiveTypes) {
    throw SizeError("mask enumeration limited to " + std::to_string(kMaxExhaustiveTypes) + " types");
  }
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<Mask> masks;
  masks.reserve(total);
  for (std::uint64_t idx = total; idx-- > 0;) {
    Mask mask(m, 0);
    for (std::size_t i = 0; i < m; ++i) mask[i] = static_cast<std::uint8_t>((idx >> i) & 1U);
    masks.push_back(std::move(mask));
  }
  return masks;
}

double kernel_weight(const Mask& mask, double kernel_width) {
  if (mask.empty()) throw DomainError("kernel_weight needs a non-empty mask");
  if (!(kernel_width > 0.0)) throw DomainError("kernel_width must be positive");
  const double k = static_cast<double>(count_active(mask));
  const double m = static_cast<double>(mask.size());
  const double d = 1.0 - std::sqrt(k / m);
  return std::exp(-(d * d) / (kernel_width * kernel_width));
}

SurrogateFit fit_local_surrogate(std::span<const Mask> masks, std::span<const double> targets,
                                 std::span<const double> sample_weights, double ridge_lambda) {
  const std::size_t n = masks.size();
  if (targets.size() != n || sample_weights.size() != n) {
    throw InputError("masks, targets and weights must have equal length");
  }
  if (n == 0) throw InputError("no samples to fit");
  const std::size_t m = masks.front().size();
  if (std::set<Mask>(masks.begin(), masks.end()).size() < 2) {
    throw InputError("surrogate fit needs at least two distinct masks");
  }
  if (!(ridge_lambda >= 0.0)) throw InputError("ridge_lambda must be non-negative");

  Eigen::MatrixXd z(n, m);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (masks[r].size() != m) throw InputError("masks have inconsistent lengths");
    if (!std::isfinite(targets[r])) throw InputError("surrogate targets must be finite");
    if (!(sample_weights[r] >= 0.0)) throw InputError("sample weights must be non-negative");
    for (std::size_t c = 0; c < m; ++c) z(r, c) = masks[r][c];
    y(r) = targets[r];
    w(r) = sample_weights[r];
  }
  const double total = w.sum();
  if (!(total > 0.0)) throw InputError("sample weights sum to zero");

  const Eigen::RowVectorXd z_mean = (w.transpose() * z) / total;
  const double y_mean = w.dot(y) / total;
  const Eigen::MatrixXd zc = z.rowwise() - z_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::MatrixXd a = zc.transpose() * w.asDiagonal() * zc;
  a.diagonal().array() += ridge_lambda;
  const Eigen::VectorXd b = zc.transpose() * (w.asDiagonal() * yc);

  SurrogateFit fit;
  const Eigen::VectorXd beta = detail::solve_symmetric(a, b, fit.degenerate);
  fit.coefficients.assign(beta.data(), beta.data() + beta.size());
  fit.intercept = y_mean - z_mean.dot(beta);

  const Eigen::VectorXd residual = yc - zc * beta;
  const double ss_res = w.dot(residual.cwiseProduct(residual));
  const double ss_tot = w.dot(yc.cwiseProduct(yc));
  if (ss_tot > 0.0) {
    fit.r2 = 1.0 - ss_res / ss_tot;
  } else {
    fit.r2 = ss_res <= 1e-300 ? 1.0 : -std::numeric_limits<double>::infinity();
  }
  return fit;
}

Explanation explain_lime(Classifier& classifier, const Instance& instance, const LimeConfig& cfg) {
  cfg.validate();
  const MaskedInstance masked(instance);
  const std::size_t m = masked.num_types();
  if (m == 0) throw InputError("instance '" + instance.id + "' has no token types to explain");

  const std::uint64_t seed = util::derive_seed(cfg.seed, instance.id);
  std::vector<Mask> masks =
      cfg.exhaustive ? enumerate_masks(m) : sample_perturbations(m, cfg.num_samples, seed);
  // A single sample cannot support a fit; contrast it with the empty text.
  if (masks.size() == 1) masks.push_back(Mask(m, 0));

  CoalitionValue value(classifier, masked, cfg.target);
  const std::vector<double> targets = value.evaluate(masks);
  std::vector<double> weights(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) weights[i] = kernel_weight(masks[i], cfg.kernel_width);

  SurrogateFit fit = fit_local_surrogate(masks, targets, weights, cfg.ridge_lambda);
  std::vector<std::size_t> kept(m);
  std::iota(kept.begin(), kept.end(), std::size_t{0});

  if (cfg.max_features && *cfg.max_features < m) {
    std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(fit.coefficients[a]) > std::abs(fit.coefficients[b]);
    });
    kept.resize(*cfg.max_features);
    std::sort(kept.begin(), kept.end());
    std::vector<Mask> projected;
    projected.reserve(masks.size());
    for (const Mask& mask : masks) {
      Mask p(kept.size());
      for (std::size_t j = 0; j < kept.size(); ++j) p[j] = mask[kept[j]];
      projected.push_back(std::move(p));
    }
    fit = fit_local_surrogate(projected, targets, weights, cfg.ridge_lambda);
  }

  Explanation expl;
  expl.instance_id = instance.id;
  expl.text = masked.text_for(full_mask(m));
  expl.explainer = ExplainerKind::lime;
  expl.predicted_index = value.predicted_index();
  expl.predicted_class = classifier.class_names().at(expl.predicted_index);
  expl.original_probs = value.original_probs();
  for (std::size_t j = 0; j < kept.size(); ++j) {
    expl.weights.emplace(masked.types()[kept[j]], fit.coefficients[j]);
  }
  expl.intercept = fit.intercept;
  expl.diagnostics.surrogate_r2 = fit.r2;
  expl.diagnostics.exact_mode = cfg.exhaustive;
  expl.diagnostics.degenerate = fit.degenerate;
  expl.diagnostics.evaluations = value.queries();
  expl.diagnostics.seed = seed;
  expl.diagnostics.target = cfg.target;
  expl.config_digest = lime_digest(cfg);
  return expl;
}

}  // namespace mixlens
