#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/cli.hpp"
#include "mixlens/classifier.hpp"
#include "mixlens/dataset.hpp"

namespace mixlens::cli {

/// Thrown by commands to terminate with a specific exit code.
class ExitError : public std::runtime_error {
 public:
  ExitError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

/// Resolved command line of one invocation, persisted next to its output
/// as `<out>.run.json` so `mixlens rerun` can replay it.
struct RunConfig {
  std::string command;
  std::vector<std::string> args;
  std::string cwd;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  void save_next_to(const std::filesystem::path& output) const;
};

/// Parses `args` with `app`. Returns an exit code when parsing ended the
/// command (help or usage error), nullopt to continue.
std::optional<int> parse_args(CLI::App& app, std::span<const std::string> args, std::ostream& out,
                              std::ostream& err);

/// "ref:<path>" (or a bare path) loads a reference model; "ext:<command>"
/// launches an external classifier.
struct LoadedClassifier {
  std::unique_ptr<Classifier> classifier;
  std::string digest;
};
LoadedClassifier open_classifier(const std::string& spec, std::size_t batch_limit);

std::string file_digest(const std::filesystem::path& path);
std::string text_digest(std::string_view text);

TableFormat resolve_format(const std::string& flag, const std::filesystem::path& path);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

LoadResult load_data_checked(const std::filesystem::path& path, const std::string& format,
                             const std::string& classes, std::ostream& err);

/// Default for --jobs: MIXLENS_JOBS if set, else the logical CPU count.
unsigned default_jobs();

std::string format_number(double value);

/// Writes `content` to `path` via a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& content);

int cmd_train(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int cmd_explain(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int cmd_eval(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int cmd_report(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int cmd_probe(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mixlens::cli
