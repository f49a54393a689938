// Synthetic sentiment corpus: every sentence carries exactly one planted
// polarity word; the rest are filler words with a mild label lean. Roughly
// 30% of all tokens are romanized Hindi words absent from the bundled
// English word list.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mixlens::testing {

struct PlantedRow {
  std::string id;
  std::string text;
  std::string label;     ///< "negative" or "positive"
  std::string planted;   ///< lookup form of the polarity word
  std::size_t num_tokens = 0;
};

struct PlantedStats {
  std::size_t tokens = 0;
  std::size_t code_mixed_tokens = 0;
  double code_mixed_fraction() const {
    return tokens == 0 ? 0.0 : static_cast<double>(code_mixed_tokens) / static_cast<double>(tokens);
  }
};

std::vector<PlantedRow> planted_corpus(std::size_t count, std::uint64_t seed);

/// Counts tokens drawn from the Hindi word lists.
PlantedStats planted_stats(const std::vector<PlantedRow>& rows);

/// Words the generator treats as English; all must be in the toy vocabulary.
std::vector<std::string> planted_english_words();
std::vector<std::string> planted_hindi_words();

void write_planted_tsv(const std::filesystem::path& path, const std::vector<PlantedRow>& rows);

}  // namespace mixlens::testing
