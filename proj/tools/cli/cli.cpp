#include "cli/cli.hpp"

#include <fstream>
#include <ostream>

#include "cli/common.hpp"
#include "mixlens/errors.hpp"

namespace mixlens::cli {
namespace {

constexpr const char* kUsageText =
    "usage: mixlens <command> [options]\n"
    "\n"
    "commands:\n"
    "  train    train the reference bag-of-words classifier\n"
    "  explain  write LIME or SHAP explanations as JSON lines\n"
    "  eval     compute log-odds deletion metrics into a CSV\n"
    "  report   render metric CSVs as an SVG figure and a text table\n"
    "  rerun    replay a persisted <output>.run.json\n"
    "  probe    check an external classifier against the wire protocol\n"
    "\n"
    "Run 'mixlens <command> --help' for command options.\n";

int cmd_rerun(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  if (args.size() != 1 || args[0] == "--help" || args[0] == "-h") {
    (args.size() == 1 ? out : err) << "usage: mixlens rerun <output>.run.json\n";
    return args.size() == 1 ? kOk : kUsage;
  }
  std::ifstream in(args[0], std::ios::binary);
  if (!in) throw IoError("cannot read " + args[0]);
  const RunConfig rc = RunConfig::from_json(nlohmann::json::parse(in));
  if (!rc.cwd.empty()) std::filesystem::current_path(rc.cwd);
  std::vector<std::string> replay{rc.command};
  replay.insert(replay.end(), rc.args.begin(), rc.args.end());
  return run(replay, out, err);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsageText;
    return kUsage;
  }
  const std::string& command = args[0];
  const auto rest = args.subspan(1);
  try {
    if (command == "train") return cmd_train(rest, out, err);
    if (command == "explain") return cmd_explain(rest, out, err);
    if (command == "eval") return cmd_eval(rest, out, err);
    if (command == "report") return cmd_report(rest, out, err);
    if (command == "rerun") return cmd_rerun(rest, out, err);
    if (command == "probe") return cmd_probe(rest, out, err);
    if (command == "--help" || command == "-h" || command == "help") {
      out << kUsageText;
      return kOk;
    }
    err << "mixlens: unknown command '" << command << "'\n" << kUsageText;
    return kUsage;
  } catch (const ExitError& e) {
    err << "mixlens " << command << ": " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "mixlens " << command << ": error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace mixlens::cli
