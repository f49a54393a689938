#include "mixlens/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "mixlens/errors.hpp"

namespace mixlens {
namespace {

using Row = std::vector<std::string>;

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Reads one RFC 4180 record. Returns false at end of input.
bool read_csv_record(std::istream& in, Row& row, std::size_t& line_no) {
  row.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  strip_cr(line);

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        // Quoted field spans a newline.
        std::string next;
        if (!std::getline(in, next)) {
          throw FormatError("line " + std::to_string(line_no) + ": unterminated quoted field");
        }
        ++line_no;
        strip_cr(next);
        field.push_back('\n');
        line = std::move(next);
        i = 0;
        continue;
      }
      row.push_back(std::move(field));
      return true;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
    ++i;
  }
}

bool read_tsv_record(std::istream& in, Row& row, std::size_t& line_no) {
  row.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  strip_cr(line);
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    row.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return true;
}

bool read_record(std::istream& in, TableFormat format, Row& row, std::size_t& line_no) {
  return format == TableFormat::csv ? read_csv_record(in, row, line_no)
                                    : read_tsv_record(in, row, line_no);
}

std::optional<std::size_t> find_column(const Row& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

}  // namespace

Instance Instance::make(std::string id, std::string text, std::optional<std::string> label) {
  Instance inst;
  inst.id = std::move(id);
  inst.tokens = tokenize(text);
  inst.text = std::move(text);
  inst.label = std::move(label);
  return inst;
}

std::optional<std::size_t> Dataset::class_index(std::string_view label) const {
  const auto it = std::find(class_names.begin(), class_names.end(), label);
  if (it == class_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - class_names.begin());
}

TableFormat table_format_for(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".csv" ? TableFormat::csv : TableFormat::tsv;
}

LoadResult load_dataset(const std::filesystem::path& path, TableFormat format,
                        const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return load_dataset(in, format, path.stem().string(), options);
}

LoadResult load_dataset(std::istream& in, TableFormat format, std::string name,
                        const LoadOptions& options) {
  LoadResult result;
  result.dataset.name = std::move(name);

  Row header;
  std::size_t line_no = 0;
  if (!read_record(in, format, header, line_no)) {
    throw FormatError("dataset '" + result.dataset.name + "' is empty (no header row)");
  }
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

  const auto text_col = find_column(header, "text");
  if (!text_col) throw FormatError("dataset header has no 'text' column");
  const auto label_col = find_column(header, "label");
  const auto id_col = find_column(header, "id");

  std::set<std::string, std::less<>> ids;
  std::set<std::string, std::less<>> labels;
  Row row;
  std::size_t data_row = 0;
  while (true) {
    const std::size_t first_line = line_no + 1;
    if (!read_record(in, format, row, line_no)) break;
    const std::size_t row_index = data_row++;
    if (row.size() == 1 && row[0].empty()) {
      ++result.rejected_rows;
      result.warnings.push_back("line " + std::to_string(first_line) + ": blank line skipped");
      continue;
    }
    if (row.size() != header.size()) {
      throw FormatError("line " + std::to_string(first_line) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(row.size()));
    }
    std::string text = row[*text_col];
    Instance inst = Instance::make(id_col ? row[*id_col] : std::to_string(row_index),
                                   std::move(text));
    if (inst.tokens.empty()) {
      ++result.rejected_rows;
      result.warnings.push_back("line " + std::to_string(first_line) + ": empty text, row rejected");
      continue;
    }
    if (!ids.insert(inst.id).second) {
      throw FormatError("line " + std::to_string(first_line) + ": duplicate id '" + inst.id + "'");
    }
    if (label_col && !row[*label_col].empty()) {
      inst.label = row[*label_col];
      labels.insert(*inst.label);
    }
    result.dataset.instances.push_back(std::move(inst));
  }

  if (options.class_names) {
    const auto& declared = *options.class_names;
    if (declared.empty()) throw InputError("declared class list is empty");
    const std::set<std::string, std::less<>> unique(declared.begin(), declared.end());
    if (unique.size() != declared.size()) throw InputError("declared class list has duplicates");
    for (const auto& label : labels) {
      if (!unique.contains(label)) {
        throw FormatError("label '" + label + "' is not among the declared classes");
      }
    }
    result.dataset.class_names = declared;
  } else {
    result.dataset.class_names.assign(labels.begin(), labels.end());
  }

  if (result.dataset.instances.empty()) {
    result.warnings.push_back("dataset '" + result.dataset.name + "' has no instances");
  }
  return result;
}

}  // namespace mixlens
