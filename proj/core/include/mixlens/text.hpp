#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixlens {

struct Token {
  std::string surface;      ///< Exactly as it appeared; used when rebuilding text.
  std::string lookup_form;  ///< Lowercased, edge punctuation stripped.
  std::size_t position = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Ordered set of lookup forms with heterogeneous lookup.
using TokenSet = std::set<std::string, std::less<>>;

/// Splits on Unicode whitespace. Invalid UTF-8 bytes are kept verbatim and
/// treated as non-space, non-alphanumeric code points.
std::vector<Token> tokenize(std::string_view text);

/// Unicode-aware lowercasing for Latin, Greek and Cyrillic; other scripts
/// pass through unchanged.
std::string lowercase(std::string_view text);

/// Lowercases and strips leading/trailing non-alphanumeric code points.
std::string normalize_lookup(std::string_view fragment);

/// Distinct non-empty lookup forms in order of first appearance.
std::vector<std::string> token_types(std::span<const Token> tokens);

/// Rejoins, with single spaces, every token whose lookup form is not in
/// `targets`. All occurrences of a targeted form are removed.
std::string delete_tokens(std::span<const Token> tokens, const TokenSet& targets);

}  // namespace mixlens
