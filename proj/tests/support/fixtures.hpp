#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mixlens/dataset.hpp"
#include "mixlens/reference_model.hpp"

namespace mixlens::testing {

/// Two-class model {negative, positive}; each entry is the token's logit
/// toward "positive" (the negative row stays zero).
ReferenceModel binary_model(const std::map<std::string, double>& positive_weights,
                            double positive_bias = 0.0);

Dataset make_dataset(const std::vector<std::pair<std::string, std::string>>& text_label,
                     std::vector<std::string> class_names = {"negative", "positive"});

/// Removed with its contents on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);

std::filesystem::path data_dir();
std::filesystem::path fake_classifier();
/// Shell command launching the fake classifier with extra arguments.
std::string fake_command(const std::string& args = {});

}  // namespace mixlens::testing
