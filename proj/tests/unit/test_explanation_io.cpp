#include <doctest.h>

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/explanation_io.hpp"
#include "mixlens/lime.hpp"
#include "mixlens/reference_model.hpp"
#include "mixlens/shap.hpp"

using namespace mixlens;

namespace {

Explanation sample() {
  Explanation e;
  e.instance_id = "row-1";
  e.text = "Accha movie \"yaar\"";
  e.explainer = ExplainerKind::shap;
  e.predicted_class = "positive";
  e.predicted_index = 1;
  e.original_probs = {0.1 + 0.2, 1.0 - (0.1 + 0.2)};
  e.weights = {{"accha", 0.8}, {"movie", -1e-17}, {"yaar", 1.0 / 3.0}};
  e.intercept = 0.25;
  e.diagnostics.efficiency_gap = 2.5e-16;
  e.diagnostics.exact_mode = true;
  e.diagnostics.evaluations = 7;
  e.diagnostics.seed = 0xfedcba9876543210ULL;
  e.config_digest = "00ff";
  e.provenance = {{"model", "ab"}, {"data", "cd"}};
  return e;
}

}  // namespace

TEST_CASE("records round-trip exactly") {
  const Explanation e = sample();
  const std::string line = to_jsonl_line(e);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(parse_jsonl_line(line) == e);
}

TEST_CASE("record layout") {
  const auto j = nlohmann::ordered_json::parse(to_jsonl_line(sample()));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"id", "text", "explainer", "predicted_class", "probs",
                                         "intercept", "weights", "diagnostics", "config_digest",
                                         "provenance"});
  CHECK(j["explainer"] == "shap");
  CHECK(j["weights"]["accha"] == 0.8);
}

TEST_CASE("non-finite r2 is written as null") {
  Explanation e = sample();
  e.explainer = ExplainerKind::lime;
  e.diagnostics.efficiency_gap.reset();
  e.diagnostics.surrogate_r2 = -std::numeric_limits<double>::infinity();
  const std::string line = to_jsonl_line(e);
  CHECK(line.find("\"surrogate_r2\":null") != std::string::npos);
  CHECK(parse_jsonl_line(line) == e);
}

TEST_CASE("real explanations survive a file round trip") {
  ReferenceClassifier clf(testing::binary_model({{"good", 1.0}, {"bad", -2.0}}));
  std::vector<Explanation> all;
  for (const char* text : {"good film", "bad bad day", "so-so"}) {
    all.push_back(explain_lime(clf, Instance::make(text, text), LimeConfig{}));
    all.push_back(explain_shap(clf, Instance::make(text, text), ShapConfig{}));
  }
  testing::TempDir dir;
  {
    std::ofstream out(dir / "e.jsonl");
    write_jsonl(out, all);
  }
  CHECK(read_jsonl(dir / "e.jsonl") == all);
}

TEST_CASE("reader errors name the line") {
  std::istringstream in(to_jsonl_line(sample()) + "\n\n{\"id\":1}\n");
  try {
    read_jsonl(in);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_jsonl_line("{\"id\":\"a\",\"explainer\":\"anchor\"}"), FormatError);
  CHECK_THROWS_AS(read_jsonl(std::filesystem::path("/nonexistent/e.jsonl")), IoError);
}
