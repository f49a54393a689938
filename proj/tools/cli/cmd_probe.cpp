#include <ostream>

#include "cli/common.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/external_classifier.hpp"

namespace mixlens::cli {

// Conformance check for an external classifier: handshake, a run of
// predictions that must be normalized to 1e-6, then a clean shutdown.
int cmd_probe(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Check that an external classifier speaks the wire protocol", "mixlens probe"};
  std::string command;
  std::size_t count = 100;
  int timeout_s = 30;
  app.add_option("--command", command, "Command that launches the classifier")->required();
  app.add_option("--predictions", count, "Number of texts to predict")->check(CLI::PositiveNumber);
  app.add_option("--timeout", timeout_s, "Handshake and response timeout in seconds")
      ->check(CLI::PositiveNumber);
  if (auto code = parse_args(app, args, out, err)) return *code;

  ExternalOptions options;
  options.handshake_timeout = std::chrono::seconds(timeout_s);
  options.response_timeout = std::chrono::seconds(timeout_s);
  options.normalization_tolerance = 1e-6;
  auto clf = ExternalClassifier::connect(command, options);
  out << "handshake ok: name '" << clf->name() << "', " << clf->class_names().size()
      << " classes [";
  for (std::size_t i = 0; i < clf->class_names().size(); ++i) {
    out << (i ? ", " : "") << clf->class_names()[i];
  }
  out << "], batch_limit " << clf->batch_limit() << "\n";

  static const char* kWords[] = {"accha", "movie", "bahut", "bekar", "good", "hai", "yaar",
                                 "boring", "film", "mast", "!", "nahi"};
  std::vector<std::string> texts;
  texts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string text;
    for (std::size_t j = 0; j < i % 7; ++j) {
      if (j) text += ' ';
      text += kWords[(i * 5 + j * 3) % std::size(kWords)];
    }
    texts.push_back(std::move(text));
  }
  const auto probs = predict_all(*clf, texts);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].size() != clf->class_names().size() || !is_valid_distribution(probs[i])) {
      throw ExitError(kFailure, "prediction " + std::to_string(i) + " is not a valid distribution");
    }
  }
  out << "predictions ok: " << probs.size() << " rows normalized within 1e-6\n";

  const int status = clf->close();
  if (status != 0) {
    throw ExitError(kFailure, "classifier exited with status " + std::to_string(status) +
                                  " after shutdown");
  }
  out << "shutdown ok\n";
  return kOk;
}

}  // namespace mixlens::cli
