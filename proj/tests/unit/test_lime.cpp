#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/lime.hpp"
#include "mixlens/masking.hpp"
#include "mixlens/reference_model.hpp"

using namespace mixlens;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> as_rows(const std::vector<Mask>& masks) {
  std::vector<std::vector<double>> rows;
  for (const auto& m : masks) rows.emplace_back(m.begin(), m.end());
  return rows;
}

}  // namespace

TEST_CASE("perturbation sampling") {
  CHECK(sample_perturbations(3, 1, 7) == std::vector<Mask>{{1, 1, 1}});

  const auto tiny = sample_perturbations(1, 4, 7);
  REQUIRE(tiny.size() == 4);
  CHECK(tiny[0] == Mask{1});
  for (std::size_t i = 1; i < tiny.size(); ++i) CHECK(tiny[i] == Mask{0});

  CHECK(sample_perturbations(6, 50, 3) == sample_perturbations(6, 50, 3));
  CHECK(sample_perturbations(6, 50, 3) != sample_perturbations(6, 50, 4));
  CHECK_THROWS_AS(sample_perturbations(0, 5, 1), DomainError);
}

TEST_CASE("number of removed types is uniform, positions uniform") {
  const std::size_t m = 4, n = 40001;
  const auto masks = sample_perturbations(m, n, 99);
  std::vector<int> removed(m + 1, 0);
  std::vector<int> off(m, 0);
  for (std::size_t i = 1; i < n; ++i) {
    ++removed[m - count_active(masks[i])];
    for (std::size_t j = 0; j < m; ++j) off[j] += masks[i][j] == 0;
  }
  CHECK(removed[0] == 0);
  for (std::size_t k = 1; k <= m; ++k) CHECK(std::abs(removed[k] - 10000) < 450);
  // E[removed] = 2.5 of 4 positions, so each position is off 62.5% of the time.
  for (int o : off) CHECK(std::abs(o - 25000) < 600);
}

TEST_CASE("mask enumeration") {
  const auto all = enumerate_masks(3);
  CHECK(all.size() == 8);
  CHECK(all.front() == Mask{1, 1, 1});
  CHECK(std::set<Mask>(all.begin(), all.end()).size() == 8);
  CHECK_THROWS_AS(enumerate_masks(21), SizeError);
}

TEST_CASE("kernel weights") {
  CHECK(kernel_weight({1, 1, 1, 1}, 25.0) == 1.0);
  CHECK(kernel_weight({1, 0, 0, 0}, 25.0) == doctest::Approx(std::exp(-0.25 / 625.0)).epsilon(1e-15));
  CHECK(kernel_weight({1, 0, 0, 0}, 25.0) == doctest::Approx(0.99960).epsilon(1e-5));
  CHECK(kernel_weight({0, 0, 0, 0}, 25.0) == doctest::Approx(0.99840).epsilon(1e-5));
  CHECK(kernel_weight({0, 0}, kInf) == 1.0);
  CHECK(kernel_weight({1, 0, 0, 0}, 0.5) < kernel_weight({1, 1, 0, 0}, 0.5));
  CHECK_THROWS_AS(kernel_weight({}, 1.0), DomainError);
  CHECK_THROWS_AS(kernel_weight({1}, 0.0), DomainError);
}

TEST_CASE("exact ols on four points") {
  const auto masks = enumerate_masks(2);
  std::vector<double> y, w(masks.size(), 1.0);
  for (const auto& z : masks) y.push_back(1.0 + 2.0 * z[0] - 1.0 * z[1]);
  const auto fit = fit_local_surrogate(masks, y, w, 0.0);
  CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.coefficients[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(fit.degenerate);
}

TEST_CASE("constant targets give zero slopes") {
  const auto masks = sample_perturbations(5, 40, 1);
  std::vector<double> y(masks.size(), 0.7), w(masks.size(), 1.0);
  const auto fit = fit_local_surrogate(masks, y, w, 1.0);
  for (double c : fit.coefficients) CHECK(std::abs(c) < 1e-12);
  CHECK(fit.intercept == doctest::Approx(0.7));
}

TEST_CASE("weighted ridge matches an elimination oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + trial % 7;
    const auto masks = sample_perturbations(m, 30 + 5 * m, 1000 + trial);
    std::vector<double> y, w;
    for (const auto& z : masks) {
      double t = unit(rng);
      for (std::size_t j = 0; j < m; ++j) t += (j % 3 == 0 ? 0.4 : -0.2) * z[j];
      y.push_back(t);
      w.push_back(0.1 + unit(rng));
    }
    const double lambda = trial % 2 ? 0.0 : 0.5 * unit(rng);
    const auto oracle = testing::gaussian_ridge(as_rows(masks), y, w, lambda);
    if (oracle.coefficients.empty()) continue;  // singular design
    const auto fit = fit_local_surrogate(masks, y, w, lambda);
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(fit.coefficients[j] == doctest::Approx(oracle.coefficients[j]).epsilon(1e-8));
    }
    CHECK(fit.intercept == doctest::Approx(oracle.intercept).epsilon(1e-8));
    CHECK(fit.r2 <= 1.0 + 1e-12);
  }
}

TEST_CASE("uniform weights and lambda zero reduce to ordinary least squares") {
  const auto masks = sample_perturbations(4, 60, 5);
  std::vector<double> y, ones(masks.size(), 1.0), twos(masks.size(), 2.0);
  for (std::size_t i = 0; i < masks.size(); ++i) y.push_back(std::sin(static_cast<double>(i)));
  const auto a = fit_local_surrogate(masks, y, ones, 0.0);
  const auto b = fit_local_surrogate(masks, y, twos, 0.0);
  for (std::size_t j = 0; j < 4; ++j) CHECK(a.coefficients[j] == doctest::Approx(b.coefficients[j]));
}

TEST_CASE("collinear features take the minimum-norm solution") {
  const std::vector<Mask> masks{{0, 0}, {1, 1}, {0, 0}, {1, 1}};
  const std::vector<double> y{0.0, 2.0, 0.0, 2.0}, w{1, 1, 1, 1};
  const auto fit = fit_local_surrogate(masks, y, w, 0.0);
  CHECK(fit.degenerate);
  CHECK(fit.coefficients[0] == doctest::Approx(1.0));
  CHECK(fit.coefficients[1] == doctest::Approx(1.0));
  CHECK(fit.intercept == doctest::Approx(0.0));
}

TEST_CASE("surrogate input validation") {
  const std::vector<Mask> same{{1, 0}, {1, 0}};
  const std::vector<double> y{1.0, 2.0}, w{1.0, 1.0};
  CHECK_THROWS_AS(fit_local_surrogate(same, y, w, 1.0), InputError);
  const std::vector<Mask> two{{1, 0}, {0, 1}};
  CHECK_THROWS_AS(fit_local_surrogate(two, std::vector<double>{1.0, NAN}, w, 1.0), InputError);
  CHECK_THROWS_AS(fit_local_surrogate(two, std::vector<double>{1.0}, w, 1.0), InputError);
}

TEST_CASE("logit-space exhaustive fit recovers a linear model exactly") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  const char* words[] = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"};
  for (std::size_t m = 1; m <= 8; ++m) {
    std::map<std::string, double> truth;
    std::string text;
    for (std::size_t j = 0; j < m; ++j) {
      truth[words[j]] = coef(rng);
      text += std::string(words[j]) + (j % 2 ? " " : " filler ");
    }
    // "filler" is unknown to the model and so carries zero weight.
    ReferenceClassifier clf(testing::binary_model(truth, 0.3));
    LimeConfig cfg;
    cfg.exhaustive = true;
    cfg.kernel_width = kInf;
    cfg.ridge_lambda = 0.0;
    cfg.target = TargetSpace::logit;
    const auto expl = explain_lime(clf, Instance::make("i", text), cfg);
    const double sign = expl.predicted_index == 1 ? 1.0 : -1.0;
    for (const auto& [w, beta] : truth) CHECK(std::abs(expl.weights.at(w) - sign * beta) < 1e-9);
    if (m >= 2) CHECK(std::abs(expl.weights.at("filler")) < 1e-9);
    CHECK(expl.diagnostics.surrogate_r2.value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(expl.diagnostics.exact_mode);
  }
}

TEST_CASE("single-token explanation points the right way") {
  ReferenceClassifier clf(testing::binary_model({{"good", 2.0}, {"bad", -1.0}}, 0.5));
  for (const char* text : {"good", "bad", "meh"}) {
    const auto inst = Instance::make("x", text);
    const auto expl = explain_lime(clf, inst, LimeConfig{});
    REQUIRE(expl.weights.size() == 1);
    const double full = predict_one(clf, text)[expl.predicted_index];
    const double gone = predict_one(clf, "")[expl.predicted_index];
    if (std::abs(full - gone) > 1e-9) {
      CHECK((expl.weights.begin()->second > 0) == (full - gone > 0));
    } else {
      CHECK(std::abs(expl.weights.begin()->second) < 1e-9);
    }
  }
}

TEST_CASE("explanations are deterministic and seeded per instance") {
  ReferenceClassifier clf(testing::binary_model({{"good", 2.0}, {"bad", -1.0}, {"yaar", 0.3}}));
  const auto inst = Instance::make("s1", "good movie yaar but bad ending");
  LimeConfig cfg;
  cfg.seed = 7;
  const auto a = explain_lime(clf, inst, cfg);
  const auto b = explain_lime(clf, inst, cfg);
  CHECK(a == b);
  cfg.seed = 8;
  CHECK(explain_lime(clf, inst, cfg).weights != a.weights);
  cfg.seed = 7;
  const auto renamed = explain_lime(clf, Instance::make("s2", inst.text), cfg);
  CHECK(renamed.diagnostics.seed != a.diagnostics.seed);

  CHECK(a.predicted_class == "positive");
  CHECK(a.weights.size() == 6);
  CHECK(a.text == inst.text);
  CHECK_FALSE(a.config_digest.empty());
}

TEST_CASE("max_features keeps the strongest types") {
  ReferenceClassifier clf(testing::binary_model({{"good", 3.0}, {"bad", -2.0}, {"meh", 0.1}}));
  LimeConfig cfg;
  cfg.max_features = 2;
  const auto expl = explain_lime(clf, Instance::make("x", "good bad meh plain"), cfg);
  CHECK(expl.weights.size() == 2);
  CHECK(expl.weights.count("good") == 1);
  CHECK(expl.weights.count("bad") == 1);
}

TEST_CASE("lime errors") {
  ReferenceClassifier clf(testing::binary_model({{"good", 1.0}}));
  CHECK_THROWS_AS(explain_lime(clf, Instance::make("x", "!!! ..."), LimeConfig{}), InputError);
  LimeConfig bad;
  bad.kernel_width = 0.0;
  CHECK_THROWS_AS(explain_lime(clf, Instance::make("x", "good"), bad), InputError);
  LimeConfig one;
  one.num_samples = 1;
  CHECK(explain_lime(clf, Instance::make("x", "good movie"), one).weights.size() == 2);
}
