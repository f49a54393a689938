#include <ostream>
#include <sstream>

#include "cli/common.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/explanation_io.hpp"
#include "mixlens/lime.hpp"
#include "mixlens/shap.hpp"
#include "mixlens/util/parallel.hpp"

namespace mixlens::cli {

int cmd_explain(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explain every instance of a dataset with LIME or SHAP", "mixlens explain"};
  std::string method;
  std::string model_spec;
  std::string data_path;
  std::string out_path;
  std::string format = "auto";
  std::string target = "probability";
  std::uint64_t seed = 0;
  LimeConfig lime;
  ShapConfig shap;
  std::size_t max_features = 0;
  std::size_t batch_limit = 64;
  unsigned jobs = default_jobs();
  bool no_overwrite = false;

  app.add_option("--method", method, "lime or shap")->required()->check(CLI::IsMember({"lime", "shap"}));
  app.add_option("--model", model_spec, "ref:<model file> or ext:<command>")->required();
  app.add_option("--data", data_path, "Dataset to explain")->required();
  app.add_option("--out", out_path, "Output JSON lines file")->required();
  app.add_option("--format", format, "auto, tsv or csv")->check(CLI::IsMember({"auto", "tsv", "csv"}));
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--samples", lime.num_samples, "LIME perturbation samples")->check(CLI::PositiveNumber);
  app.add_option("--kernel-width", lime.kernel_width, "LIME kernel width")->check(CLI::PositiveNumber);
  app.add_option("--ridge", lime.ridge_lambda, "LIME ridge penalty")->check(CLI::NonNegativeNumber);
  app.add_option("--max-features", max_features, "LIME: keep the k largest weights (0 = all)");
  app.add_option("--budget", shap.budget, "SHAP coalition budget")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
  app.add_option("--target", target, "probability or logit")->check(CLI::IsMember({"probability", "logit"}));
  app.add_option("--batch-limit", batch_limit, "Batch size for reference models")->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "Worker threads (default: MIXLENS_JOBS or CPU count)")->check(CLI::PositiveNumber);
  app.add_flag("--no-overwrite", no_overwrite, "Refuse to replace an existing output file");
  if (auto code = parse_args(app, args, out, err)) return *code;

  if (no_overwrite && std::filesystem::exists(out_path)) {
    throw ExitError(kRefusedOverwrite, "refusing to overwrite existing " + out_path);
  }

  const TargetSpace space = target == "logit" ? TargetSpace::logit : TargetSpace::probability;
  lime.seed = shap.seed = seed;
  lime.target = shap.target = space;
  if (max_features > 0) lime.max_features = max_features;
  const bool use_lime = method == "lime";
  if (use_lime) {
    lime.validate();
  } else {
    shap.validate();
  }

  const LoadResult loaded = load_data_checked(data_path, format, "", err);
  const Dataset& data = loaded.dataset;
  LoadedClassifier clf = open_classifier(model_spec, batch_limit);

  const std::string data_digest = file_digest(data_path);
  std::vector<Explanation> explanations(data.instances.size());
  util::parallel_for(data.instances.size(), jobs, [&](std::size_t i) {
    const Instance& inst = data.instances[i];
    try {
      explanations[i] = use_lime ? explain_lime(*clf.classifier, inst, lime)
                                 : explain_shap(*clf.classifier, inst, shap);
    } catch (const PredictionError& e) {
      throw ExitError(kFailure, "prediction failed for instance '" + inst.id + "': " + e.what());
    } catch (const ProtocolError& e) {
      throw ExitError(kFailure, "protocol error for instance '" + inst.id + "': " + e.what());
    }
  });

  // The run digest ties explainer settings to the exact model and data.
  std::string explainer_digest = explanations.empty() ? "" : explanations.front().config_digest;
  const std::string run_digest =
      text_digest("explain;explainer=" + explainer_digest + ";model=" + clf.digest +
                  ";data=" + data_digest + ";seed=" + std::to_string(seed));
  std::ostringstream body;
  std::size_t exact = 0;
  for (Explanation& e : explanations) {
    e.config_digest = run_digest;
    e.provenance = {{"model", clf.digest}, {"data", data_digest},
                    {"explainer", explainer_digest}, {"seed", std::to_string(seed)}};
    if (e.diagnostics.exact_mode) ++exact;
    body << to_jsonl_line(e) << '\n';
  }
  write_file(out_path, body.str());
  RunConfig{"explain", {args.begin(), args.end()}, std::filesystem::current_path().string()}
      .save_next_to(out_path);

  out << "explained " << explanations.size() << " instances with " << method;
  if (!use_lime) out << " (" << exact << " in exact mode)";
  out << "\nwrote " << out_path << " (config " << run_digest << ")\n";
  return kOk;
}

}  // namespace mixlens::cli
