#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace mixlens::testing {

ReferenceModel binary_model(const std::map<std::string, double>& positive_weights,
                            double positive_bias) {
  std::vector<std::string> features;
  for (const auto& [token, w] : positive_weights) features.push_back(token);
  ReferenceModel model = ReferenceModel::zeros({"negative", "positive"}, features);
  for (const auto& [token, w] : positive_weights) model.set_weight(1, token, w);
  model.set_bias(1, positive_bias);
  return model;
}

Dataset make_dataset(const std::vector<std::pair<std::string, std::string>>& text_label,
                     std::vector<std::string> class_names) {
  Dataset data;
  data.name = "inline";
  data.class_names = std::move(class_names);
  for (std::size_t i = 0; i < text_label.size(); ++i) {
    const auto& [text, label] = text_label[i];
    data.instances.push_back(Instance::make(std::to_string(i), text,
                                            label.empty() ? std::nullopt
                                                          : std::optional<std::string>(label)));
  }
  return data;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("mixlens-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::filesystem::path data_dir() { return MIXLENS_TEST_DATA_DIR; }
std::filesystem::path fake_classifier() { return MIXLENS_FAKE_CLASSIFIER; }

std::string fake_command(const std::string& args) {
  std::string cmd = "'" + fake_classifier().string() + "'";
  if (!args.empty()) cmd += " " + args;
  return cmd;
}

}  // namespace mixlens::testing
