#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mixlens/text.hpp"

namespace mixlens {

struct Instance {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::optional<std::string> label;

  static Instance make(std::string id, std::string text,
                       std::optional<std::string> label = std::nullopt);
};

struct Dataset {
  std::string name;
  std::vector<Instance> instances;
  std::vector<std::string> class_names;

  /// Index of `label` in class_names, or nullopt.
  std::optional<std::size_t> class_index(std::string_view label) const;
};

enum class TableFormat { tsv, csv };

/// `.csv` selects CSV, anything else TSV.
TableFormat table_format_for(const std::filesystem::path& path);

struct LoadOptions {
  /// Declared class order. When absent, the sorted distinct labels are used.
  std::optional<std::vector<std::string>> class_names;
};

struct LoadResult {
  Dataset dataset;
  std::size_t rejected_rows = 0;
  std::vector<std::string> warnings;
};

LoadResult load_dataset(const std::filesystem::path& path, TableFormat format,
                        const LoadOptions& options = {});
LoadResult load_dataset(std::istream& in, TableFormat format, std::string name,
                        const LoadOptions& options = {});

}  // namespace mixlens
