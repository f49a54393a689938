#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mixlens/text.hpp"

namespace mixlens {

/// Reference English word list (e.g. the GloVe 6B tokens). Entries are
/// lowercase; membership is exact string equality.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::string source_name, std::initializer_list<std::string_view> words);

  void insert(std::string_view word);
  bool contains(std::string_view lookup_form) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const TokenSet& entries() const noexcept { return entries_; }
  const std::string& source_name() const noexcept { return source_name_; }
  void set_source_name(std::string name) { source_name_ = std::move(name); }

 private:
  TokenSet entries_;
  std::string source_name_;
};

Vocabulary load_vocab(const std::filesystem::path& path);
Vocabulary load_vocab(std::istream& in, std::string source_name);

enum class TokenClass { in_vocabulary, code_mixed, punctuation };

TokenClass classify_token(const Token& token, const Vocabulary& vocab);

/// True iff the token is a word (non-empty lookup form) missing from `vocab`.
bool is_code_mixed(const Token& token, const Vocabulary& vocab);

}  // namespace mixlens
