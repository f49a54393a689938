#include "mixlens/explanation_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "mixlens/errors.hpp"

namespace mixlens {
namespace {

using ojson = nlohmann::ordered_json;

std::string_view to_string(TargetSpace target) {
  return target == TargetSpace::logit ? "logit" : "probability";
}

TargetSpace parse_target(std::string_view s) {
  if (s == "logit") return TargetSpace::logit;
  if (s == "probability") return TargetSpace::probability;
  throw FormatError("unknown target space '" + std::string(s) + "'");
}

ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

std::string_view to_string(ExplainerKind kind) {
  return kind == ExplainerKind::lime ? "lime" : "shap";
}

ExplainerKind parse_explainer(std::string_view name) {
  if (name == "lime") return ExplainerKind::lime;
  if (name == "shap") return ExplainerKind::shap;
  throw InputError("unknown explainer '" + std::string(name) + "'");
}

std::string to_jsonl_line(const Explanation& expl) {
  ojson weights = ojson::object();
  for (const auto& [token, w] : expl.weights) weights[token] = w;

  ojson diag = ojson::object();
  if (expl.diagnostics.surrogate_r2) diag["surrogate_r2"] = finite_or_null(*expl.diagnostics.surrogate_r2);
  if (expl.diagnostics.efficiency_gap) diag["efficiency_gap"] = *expl.diagnostics.efficiency_gap;
  diag["exact_mode"] = expl.diagnostics.exact_mode;
  diag["degenerate"] = expl.diagnostics.degenerate;
  diag["evaluations"] = expl.diagnostics.evaluations;
  diag["seed"] = expl.diagnostics.seed;
  diag["target"] = to_string(expl.diagnostics.target);

  ojson rec = ojson::object();
  rec["id"] = expl.instance_id;
  rec["text"] = expl.text;
  rec["explainer"] = to_string(expl.explainer);
  rec["predicted_class"] = expl.predicted_class;
  rec["probs"] = expl.original_probs;
  rec["intercept"] = expl.intercept;
  rec["weights"] = std::move(weights);
  rec["diagnostics"] = std::move(diag);
  rec["config_digest"] = expl.config_digest;
  if (!expl.provenance.empty()) rec["provenance"] = expl.provenance;
  return rec.dump(-1, ' ', false, ojson::error_handler_t::replace);
}

Explanation parse_jsonl_line(std::string_view line) {
  try {
    const ojson rec = ojson::parse(line);
    Explanation expl;
    expl.instance_id = rec.at("id").get<std::string>();
    expl.text = rec.value("text", "");
    expl.explainer = parse_explainer(rec.at("explainer").get<std::string>());
    expl.predicted_class = rec.at("predicted_class").get<std::string>();
    expl.original_probs = rec.at("probs").get<std::vector<double>>();
    expl.intercept = rec.at("intercept").get<double>();
    for (const auto& [token, w] : rec.at("weights").items()) {
      expl.weights.emplace(token, w.get<double>());
    }
    const ojson& diag = rec.at("diagnostics");
    if (diag.contains("surrogate_r2")) {
      const ojson& r2 = diag["surrogate_r2"];
      expl.diagnostics.surrogate_r2 =
          r2.is_null() ? -std::numeric_limits<double>::infinity() : r2.get<double>();
    }
    if (diag.contains("efficiency_gap")) expl.diagnostics.efficiency_gap = diag["efficiency_gap"].get<double>();
    expl.diagnostics.exact_mode = diag.value("exact_mode", false);
    expl.diagnostics.degenerate = diag.value("degenerate", false);
    expl.diagnostics.evaluations = diag.value("evaluations", std::size_t{0});
    expl.diagnostics.seed = diag.value("seed", std::uint64_t{0});
    expl.diagnostics.target = parse_target(diag.value("target", "probability"));
    expl.config_digest = rec.value("config_digest", "");
    if (rec.contains("provenance")) {
      expl.provenance = rec["provenance"].get<std::map<std::string, std::string>>();
    }

    const auto& probs = expl.original_probs;
    if (probs.empty()) throw FormatError("empty probability vector");
    expl.predicted_index = 0;
    for (std::size_t i = 1; i < probs.size(); ++i) {
      if (probs[i] > probs[expl.predicted_index]) expl.predicted_index = i;
    }
    return expl;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed explanation record: ") + e.what());
  } catch (const InputError& e) {
    throw FormatError(e.what());
  }
}

void write_jsonl(std::ostream& out, const std::vector<Explanation>& explanations) {
  for (const Explanation& e : explanations) out << to_jsonl_line(e) << '\n';
}

std::vector<Explanation> read_jsonl(std::istream& in) {
  std::vector<Explanation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(parse_jsonl_line(line));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Explanation> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read explanations " + path.string());
  return read_jsonl(in);
}

}  // namespace mixlens
