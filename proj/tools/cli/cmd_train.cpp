#include <ostream>

#include "cli/common.hpp"
#include "mixlens/reference_model.hpp"

namespace mixlens::cli {

int cmd_train(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train the reference bag-of-words logistic regression classifier", "mixlens train"};
  std::string data_path;
  std::string out_path;
  std::string format = "auto";
  std::string classes;
  TrainingHyper hyper;
  app.add_option("--data", data_path, "Training table (TSV or CSV with a 'text' column)")->required();
  app.add_option("--out", out_path, "Model file to write")->required();
  app.add_option("--format", format, "auto, tsv or csv")->check(CLI::IsMember({"auto", "tsv", "csv"}));
  app.add_option("--classes", classes, "Comma-separated class order (default: sorted labels)");
  app.add_option("--seed", hyper.seed, "Seed recorded in the model");
  app.add_option("--epochs", hyper.epochs, "Full-batch gradient steps")->check(CLI::NonNegativeNumber);
  app.add_option("--lr", hyper.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  app.add_option("--l2", hyper.l2, "L2 penalty on weights")->check(CLI::NonNegativeNumber);
  if (auto code = parse_args(app, args, out, err)) return *code;

  const LoadResult loaded = load_data_checked(data_path, format, classes, err);
  ReferenceModel model = train_reference(loaded.dataset, hyper);

  const std::string canon = "train;data=" + file_digest(data_path) + ";classes=" + classes +
                            ";format=" + format + ";seed=" + std::to_string(hyper.seed) +
                            ";epochs=" + std::to_string(hyper.epochs) +
                            ";lr=" + format_number(hyper.learning_rate) +
                            ";l2=" + format_number(hyper.l2);
  TrainingMeta meta = model.meta();
  meta.config_digest = text_digest(canon);
  model = ReferenceModel(model.class_names(), model.features(), model.weights(), model.bias(), meta);

  write_file(out_path, model.to_json());
  RunConfig{"train", {args.begin(), args.end()}, std::filesystem::current_path().string()}
      .save_next_to(out_path);

  const double accuracy = training_accuracy(model, loaded.dataset);
  out << "trained reference model on " << loaded.dataset.instances.size() << " instances: "
      << model.num_classes() << " classes, " << model.num_features() << " features\n"
      << "final loss " << format_number(model.meta().final_loss) << ", training accuracy "
      << format_number(accuracy) << "\n"
      << "wrote " << out_path << " (config " << meta.config_digest << ")\n";
  return kOk;
}

}  // namespace mixlens::cli
