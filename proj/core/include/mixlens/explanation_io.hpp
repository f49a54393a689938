#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mixlens/explanation.hpp"

namespace mixlens {

/// One JSON object, no trailing newline:
/// {"id","text","explainer","predicted_class","probs","intercept","weights",
///  "diagnostics","config_digest"[,"provenance"]}
std::string to_jsonl_line(const Explanation& expl);
Explanation parse_jsonl_line(std::string_view line);

void write_jsonl(std::ostream& out, const std::vector<Explanation>& explanations);
/// Blank lines are skipped; FormatError names the offending line number.
std::vector<Explanation> read_jsonl(std::istream& in);
std::vector<Explanation> read_jsonl(const std::filesystem::path& path);

}  // namespace mixlens
