#include <algorithm>
#include <charconv>
#include <ostream>
#include <map>
#include <set>

#include "cli/common.hpp"
#include "cli/metric_csv.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/explanation_io.hpp"
#include "mixlens/metrics.hpp"
#include "mixlens/vocabulary.hpp"

namespace mixlens::cli {
namespace {

std::vector<std::size_t> parse_n_range(const std::string& spec) {
  auto to_size = [&](std::string_view s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ExitError(kUsage, "invalid --n value '" + spec + "'");
    }
    return v;
  };
  std::vector<std::size_t> out;
  if (const auto colon = spec.find(':'); colon != std::string::npos) {
    const std::size_t lo = to_size(std::string_view(spec).substr(0, colon));
    const std::size_t hi = to_size(std::string_view(spec).substr(colon + 1));
    if (lo > hi) throw ExitError(kUsage, "empty --n range '" + spec + "'");
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
  } else {
    for (const auto& item : split_list(spec)) out.push_back(to_size(item));
  }
  if (out.empty()) throw ExitError(kUsage, "no values in --n '" + spec + "'");
  return out;
}

std::vector<MetricVariant> parse_variants(const std::string& spec) {
  std::vector<MetricVariant> out;
  for (const auto& item : split_list(spec)) {
    if (item == "all") {
      return {MetricVariant::sentence, MetricVariant::model, MetricVariant::codemixed};
    }
    MetricVariant v;
    try {
      v = parse_variant(item);
    } catch (const InputError&) {
      throw ExitError(kUsage, "unknown --variant '" + item + "'");
    }
    if (v == MetricVariant::random_baseline) {
      throw ExitError(kUsage, "use --baseline random for the random baseline");
    }
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  if (out.empty()) throw ExitError(kUsage, "no --variant given");
  return out;
}

struct ExplanationFile {
  std::string path;
  std::vector<Explanation> records;
  ExplainerKind explainer = ExplainerKind::lime;
  std::string digest;
  std::uint64_t seed = 0;
};

ExplanationFile load_explanations(const std::string& path) {
  ExplanationFile file;
  file.path = path;
  file.records = read_jsonl(path);
  if (file.records.empty()) throw ExitError(kMismatch, path + " contains no explanations");
  file.explainer = file.records.front().explainer;
  file.digest = file.records.front().config_digest;
  for (const Explanation& e : file.records) {
    if (e.explainer != file.explainer) throw ExitError(kMismatch, path + " mixes explainers");
    if (e.config_digest != file.digest) {
      throw ExitError(kMismatch, path + " mixes records from different runs (config digests differ)");
    }
  }
  const auto& prov = file.records.front().provenance;
  if (const auto it = prov.find("seed"); it != prov.end()) {
    std::from_chars(it->second.data(), it->second.data() + it->second.size(), file.seed);
  }
  return file;
}

void verify_digest(const ExplanationFile& file, const std::string& model_digest,
                   const std::string* data_digest) {
  const auto& prov = file.records.front().provenance;
  auto field = [&](const char* key) {
    const auto it = prov.find(key);
    return it == prov.end() ? std::string() : it->second;
  };
  const std::string recomputed =
      text_digest("explain;explainer=" + field("explainer") + ";model=" + field("model") +
                  ";data=" + field("data") + ";seed=" + field("seed"));
  if (recomputed != file.digest) {
    throw ExitError(kMismatch, file.path + ": config digest does not match its provenance (use --force)");
  }
  if (field("model") != model_digest) {
    throw ExitError(kMismatch, file.path + " was produced by a different model than --model (use --force)");
  }
  if (data_digest && field("data") != *data_digest) {
    throw ExitError(kMismatch, file.path + " was produced from different data than --data (use --force)");
  }
}

Dataset dataset_from_records(const ExplanationFile& file) {
  Dataset data;
  data.name = file.path;
  for (const Explanation& e : file.records) {
    if (e.text.empty()) {
      throw ExitError(kUsage, file.path + " records carry no text; pass --data");
    }
    data.instances.push_back(Instance::make(e.instance_id, e.text));
  }
  return data;
}

void check_alignment(const ExplanationFile& file, const Dataset& data) {
  std::map<std::string, const Explanation*> by_id;
  for (const Explanation& e : file.records) {
    if (!by_id.emplace(e.instance_id, &e).second) {
      throw ExitError(kMismatch, file.path + ": duplicate id '" + e.instance_id + "'");
    }
  }
  if (by_id.size() != data.instances.size()) {
    throw ExitError(kMismatch, file.path + " explains " + std::to_string(by_id.size()) +
                                   " instances but the dataset has " +
                                   std::to_string(data.instances.size()));
  }
  for (const Instance& inst : data.instances) {
    const auto it = by_id.find(inst.id);
    if (it == by_id.end()) {
      throw ExitError(kMismatch, file.path + " has no explanation for instance '" + inst.id + "'");
    }
    const std::string rejoined = delete_tokens(inst.tokens, {});
    if (!it->second->text.empty() && it->second->text != rejoined) {
      throw ExitError(kMismatch, file.path + ": text of instance '" + inst.id + "' differs from the dataset");
    }
  }
}

}  // namespace

int cmd_eval(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compute log-odds deletion metrics (MAELOSD) for explanation files", "mixlens eval"};
  std::vector<std::string> expl_paths;
  std::string model_spec;
  std::string data_path;
  std::string vocab_path;
  std::string variant_spec = "all";
  std::string n_spec = "1:5";
  std::string baseline;
  std::string out_path;
  std::string format = "auto";
  std::string rank = "signed";
  std::string global_mode = "auto";
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
  std::size_t batch_limit = 64;
  unsigned jobs = default_jobs();
  bool force = false;

  app.add_option("--expl", expl_paths, "Explanation JSONL file (repeatable)")->required();
  app.add_option("--model", model_spec, "ref:<model file> or ext:<command>")->required();
  app.add_option("--data", data_path, "Dataset (default: texts embedded in the explanations)");
  app.add_option("--vocab", vocab_path, "Reference vocabulary, one word per line");
  app.add_option("--variant", variant_spec, "sentence, model, codemixed or all (comma list)");
  app.add_option("--n", n_spec, "Deletion counts: 'a:b' or a comma list");
  app.add_option("--baseline", baseline, "Add a baseline: random")->check(CLI::IsMember({"random"}));
  app.add_option("--seed", seed, "Seed for the random baseline");
  app.add_option("--epsilon", epsilon, "Probability clamp for log-odds")->check(CLI::Range(1e-300, 0.49));
  app.add_option("--rank", rank, "signed or abs weight ranking")->check(CLI::IsMember({"signed", "abs"}));
  app.add_option("--global-mode", global_mode, "auto, mean_signed or mean_abs")
      ->check(CLI::IsMember({"auto", "mean_signed", "mean_abs"}));
  app.add_option("--out", out_path, "Metric CSV to write")->required();
  app.add_option("--format", format, "auto, tsv or csv")->check(CLI::IsMember({"auto", "tsv", "csv"}));
  app.add_option("--batch-limit", batch_limit, "Batch size for reference models")->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "Worker threads (default: MIXLENS_JOBS or CPU count)")->check(CLI::PositiveNumber);
  app.add_flag("--force", force, "Skip the config digest checks");
  if (auto code = parse_args(app, args, out, err)) return *code;

  const std::vector<MetricVariant> variants = parse_variants(variant_spec);
  const std::vector<std::size_t> ns = parse_n_range(n_spec);
  const bool wants_codemixed =
      std::find(variants.begin(), variants.end(), MetricVariant::codemixed) != variants.end();
  if (wants_codemixed && vocab_path.empty()) {
    throw ExitError(kUsage, "the codemixed variant needs --vocab");
  }

  std::vector<ExplanationFile> files;
  for (const auto& p : expl_paths) files.push_back(load_explanations(p));

  LoadedClassifier clf = open_classifier(model_spec, batch_limit);
  std::string data_digest;
  Dataset data;
  if (!data_path.empty()) {
    data = load_data_checked(data_path, format, "", err).dataset;
    data_digest = file_digest(data_path);
  } else {
    data = dataset_from_records(files.front());
  }
  Vocabulary vocab;
  std::string vocab_digest;
  if (!vocab_path.empty()) {
    vocab = load_vocab(vocab_path);
    vocab_digest = file_digest(vocab_path);
    if (vocab.empty()) err << "warning: vocabulary is empty; every word counts as code-mixed\n";
  }

  for (const ExplanationFile& f : files) {
    if (!force) verify_digest(f, clf.digest, data_path.empty() ? nullptr : &data_digest);
    check_alignment(f, data);
  }

  EvalOptions options;
  options.epsilon = epsilon;
  options.rank = rank == "abs" ? RankMode::absolute : RankMode::signed_weight;
  options.jobs = jobs;

  std::vector<MetricRow> rows;
  try {
    for (const ExplanationFile& f : files) {
      const GlobalMode mode = global_mode == "auto" ? default_global_mode(f.explainer)
                              : global_mode == "mean_abs" ? GlobalMode::mean_abs
                                                          : GlobalMode::mean_signed;
      std::optional<GlobalWeights> global;
      for (MetricVariant v : variants) {
        if (v == MetricVariant::model && !global) global = aggregate_global(f.records, mode);
        for (std::size_t n : ns) {
          MetricResult r;
          switch (v) {
            case MetricVariant::sentence:
              r = maelosd_sentence(*clf.classifier, f.records, data, n, options);
              break;
            case MetricVariant::model:
              r = maelosd_model(*clf.classifier, *global, data, n, options);
              break;
            case MetricVariant::codemixed:
              r = maelosd_codemixed(*clf.classifier, f.records, data, vocab, n, options);
              break;
            case MetricVariant::random_baseline:
              break;
          }
          rows.push_back({std::string(to_string(v)), std::string(to_string(f.explainer)), n, r.value,
                          r.num_instances, r.num_degenerate, f.seed});
        }
      }
    }
    if (baseline == "random") {
      for (std::size_t n : ns) {
        const MetricResult r = random_deletion_baseline(*clf.classifier, data, n, seed, options);
        rows.push_back({"random_baseline", "random", n, r.value, r.num_instances, r.num_degenerate, seed});
      }
    }
  } catch (const InputError& e) {
    throw ExitError(kMismatch, e.what());
  }

  std::string canon = "eval;model=" + clf.digest + ";data=" + (data_path.empty() ? "records" : data_digest) +
                      ";vocab=" + vocab_digest + ";variants=" + variant_spec + ";n=" + n_spec +
                      ";baseline=" + baseline + ";seed=" + std::to_string(seed) +
                      ";epsilon=" + format_number(epsilon) + ";rank=" + rank + ";global=" + global_mode;
  for (const ExplanationFile& f : files) canon += ";expl=" + f.digest;
  const std::string digest = text_digest(canon);

  write_file(out_path, render_metric_csv(rows, digest));
  RunConfig{"eval", {args.begin(), args.end()}, std::filesystem::current_path().string()}
      .save_next_to(out_path);

  for (const MetricRow& r : rows) {
    out << r.variant << " " << r.explainer << " n=" << r.n << " maelosd=" << format_number(r.maelosd)
        << " degenerate=" << r.num_degenerate << "/" << r.num_instances << "\n";
  }
  out << "wrote " << out_path << " (config " << digest << ")\n";
  return kOk;
}

}  // namespace mixlens::cli
