#include "cli/common.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mixlens/errors.hpp"
#include "mixlens/external_classifier.hpp"
#include "mixlens/reference_model.hpp"
#include "mixlens/util/hash.hpp"
#include "mixlens/util/parallel.hpp"

namespace mixlens::cli {

nlohmann::json RunConfig::to_json() const {
  return {{"format", "mixlens-run-config"}, {"format_version", 1},
          {"command", command}, {"args", args}, {"cwd", cwd}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "mixlens-run-config") throw FormatError("not a run configuration");
  RunConfig rc;
  rc.command = j.at("command").get<std::string>();
  rc.args = j.at("args").get<std::vector<std::string>>();
  rc.cwd = j.value("cwd", "");
  return rc;
}

void RunConfig::save_next_to(const std::filesystem::path& output) const {
  std::filesystem::path p = output;
  p += ".run.json";
  write_file(p, to_json().dump(2) + "\n");
}

std::optional<int> parse_args(CLI::App& app, std::span<const std::string> args, std::ostream& out,
                              std::ostream& err) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n"
        << "Run with --help for usage.\n";
    return kUsage;
  }
  return std::nullopt;
}

std::string text_digest(std::string_view text) { return util::to_hex(util::fnv1a64(text)); }

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return text_digest(buf.str());
}

LoadedClassifier open_classifier(const std::string& spec, std::size_t batch_limit) {
  LoadedClassifier loaded;
  if (spec.starts_with("ext:")) {
    const std::string command = spec.substr(4);
    if (command.empty()) throw InputError("empty external classifier command");
    loaded.classifier = connect_external(command);
    loaded.digest = text_digest(spec);
    return loaded;
  }
  const std::string path = spec.starts_with("ref:") ? spec.substr(4) : spec;
  loaded.classifier = std::make_unique<ReferenceClassifier>(ReferenceModel::load(path), batch_limit);
  loaded.digest = file_digest(path);
  return loaded;
}

TableFormat resolve_format(const std::string& flag, const std::filesystem::path& path) {
  if (flag == "csv") return TableFormat::csv;
  if (flag == "tsv") return TableFormat::tsv;
  return table_format_for(path);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

LoadResult load_data_checked(const std::filesystem::path& path, const std::string& format,
                             const std::string& classes, std::ostream& err) {
  LoadOptions options;
  if (!classes.empty()) options.class_names = split_list(classes);
  LoadResult result = load_dataset(path, resolve_format(format, path), options);
  for (const auto& w : result.warnings) err << "warning: " << path.string() << ": " << w << "\n";
  return result;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("MIXLENS_JOBS")) {
    unsigned value = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && value > 0) return value;
  }
  return util::default_jobs();
}

std::string format_number(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("error writing " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mixlens::cli
