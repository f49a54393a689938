#include "mixlens/vocabulary.hpp"

#include <fstream>
#include <istream>

#include "mixlens/errors.hpp"

namespace mixlens {

Vocabulary::Vocabulary(std::string source_name, std::initializer_list<std::string_view> words)
    : source_name_(std::move(source_name)) {
  for (auto w : words) insert(w);
}

void Vocabulary::insert(std::string_view word) {
  if (word.empty()) return;
  entries_.insert(lowercase(word));
}

bool Vocabulary::contains(std::string_view lookup_form) const {
  return entries_.find(lookup_form) != entries_.end();
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vocabulary " + path.string());
  return load_vocab(in, path.filename().string());
}

Vocabulary load_vocab(std::istream& in, std::string source_name) {
  Vocabulary vocab;
  vocab.set_source_name(std::move(source_name));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    first = false;
    // A GloVe vectors file works too: only the first field is the word.
    const auto end = line.find_first_of(" \t");
    vocab.insert(std::string_view(line).substr(0, end));
  }
  if (in.bad()) throw IoError("error while reading vocabulary " + vocab.source_name());
  return vocab;
}

TokenClass classify_token(const Token& token, const Vocabulary& vocab) {
  if (token.lookup_form.empty()) return TokenClass::punctuation;
  return vocab.contains(token.lookup_form) ? TokenClass::in_vocabulary : TokenClass::code_mixed;
}

bool is_code_mixed(const Token& token, const Vocabulary& vocab) {
  return classify_token(token, vocab) == TokenClass::code_mixed;
}

}  // namespace mixlens
