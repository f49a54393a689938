// Stand-in external classifier speaking the line-delimited JSON protocol.
// Misbehaviours are switched on from the command line so the client's
// error handling can be exercised.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixlens/reference_model.hpp"

namespace {

using nlohmann::json;

// Keyword scorer used when no model file is given: "good" pushes toward
// the last class, "bad" toward the first.
std::vector<double> keyword_probs(const std::string& text, std::size_t k) {
  std::vector<double> logits(k, 0.0);
  std::size_t pos = 0;
  const std::string padded = " " + text + " ";
  while ((pos = padded.find(" good ", pos)) != std::string::npos) {
    logits[k - 1] += 2.0;
    pos += 5;
  }
  pos = 0;
  while ((pos = padded.find(" bad ", pos)) != std::string::npos) {
    logits[0] += 2.0;
    pos += 4;
  }
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (double& v : logits) sum += (v = std::exp(v - mx));
  for (double& v : logits) v /= sum;
  return logits;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fake external classifier"};
  std::vector<std::string> classes{"negative", "neutral", "positive"};
  long batch_limit = 4;
  std::string model_path, handshake_mode = "ok", fail_on, log_path;
  bool wrong_rows = false, unnormalized = false, float32 = false, omit_limit = false;
  int die_after = -1;
  app.add_option("--classes", classes)->delimiter(',');
  app.add_option("--batch-limit", batch_limit);
  app.add_option("--model", model_path);
  app.add_option("--handshake", handshake_mode)
      ->check(CLI::IsMember({"ok", "garbage", "empty", "duplicate", "error", "silent", "exit"}));
  app.add_option("--fail-on", fail_on, "answer with an error when a batch contains this text");
  app.add_option("--die-after", die_after, "exit abruptly after this many predict requests");
  app.add_option("--log", log_path, "append each batch size to this file");
  app.add_flag("--wrong-rows", wrong_rows);
  app.add_flag("--unnormalized", unnormalized);
  app.add_flag("--float32", float32);
  app.add_flag("--omit-limit", omit_limit);
  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<mixlens::ReferenceModel> model;
  if (!model_path.empty()) {
    model = std::make_unique<mixlens::ReferenceModel>(mixlens::ReferenceModel::load(model_path));
    classes = model->class_names();
  }

  std::string line;
  int predicts = 0;
  while (std::getline(std::cin, line)) {
    json request;
    try {
      request = json::parse(line);
    } catch (const json::exception&) {
      std::cout << json{{"error", "malformed request"}}.dump() << std::endl;
      continue;
    }
    const std::string op = request.value("op", "");
    if (op == "handshake") {
      if (handshake_mode == "garbage") {
        std::cout << "hello there" << std::endl;
        continue;
      }
      if (handshake_mode == "silent") {
        std::this_thread::sleep_for(std::chrono::seconds(30));
        return 0;
      }
      if (handshake_mode == "exit") return 1;
      if (handshake_mode == "error") {
        std::cout << json{{"error", "model failed to load"}}.dump() << std::endl;
        return 1;
      }
      json reply = {{"classes", classes}, {"name", "fake"}};
      if (handshake_mode == "empty") reply["classes"] = json::array();
      if (handshake_mode == "duplicate") reply["classes"] = {"a", "b", "a"};
      if (!omit_limit) reply["batch_limit"] = batch_limit;
      std::cout << reply.dump() << std::endl;
    } else if (op == "predict") {
      if (die_after >= 0 && predicts >= die_after) std::_Exit(3);
      ++predicts;
      const auto texts = request.at("texts").get<std::vector<std::string>>();
      if (!log_path.empty()) std::ofstream(log_path, std::ios::app) << texts.size() << '\n';
      bool fail = false;
      for (const auto& t : texts) fail = fail || (!fail_on.empty() && t == fail_on);
      if (fail) {
        std::cout << json{{"error", "refused: " + fail_on}}.dump() << std::endl;
        continue;
      }
      json rows = json::array();
      for (const auto& t : texts) {
        std::vector<double> p = model ? model->predict(std::string_view(t))
                                      : keyword_probs(t, classes.size());
        if (unnormalized) p[0] += 0.5;
        if (float32) {
          for (double& v : p) v = static_cast<double>(static_cast<float>(v));
          p[0] += 2e-7;
        }
        rows.push_back(p);
      }
      if (wrong_rows && !rows.empty()) rows.erase(rows.end() - 1);
      std::cout << json{{"probs", rows}}.dump() << std::endl;
    } else if (op == "shutdown") {
      return 0;
    } else {
      std::cout << json{{"error", "unknown op"}}.dump() << std::endl;
    }
  }
  return 0;
}
