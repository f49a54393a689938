#include <doctest.h>

#include <random>

#include "mixlens/text.hpp"

using namespace mixlens;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

}  // namespace

TEST_CASE("tokenize splits on whitespace and normalizes lookup forms") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n ").empty());

  const auto tokens = tokenize("Accha movie!");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0] == Token{"Accha", "accha", 0});
  CHECK(tokens[1] == Token{"movie!", "movie", 1});

  const auto doubled = tokenize("good  movie");
  CHECK(surfaces(doubled) == std::vector<std::string>{"good", "movie"});
  CHECK(doubled[1].position == 1);
}

TEST_CASE("edge punctuation is stripped but inner punctuation kept") {
  CHECK(normalize_lookup("\"Don't!\"") == "don't");
  CHECK(normalize_lookup("(e-mail),") == "e-mail");
  CHECK(normalize_lookup("...") == "");
  CHECK(normalize_lookup("!!!") == "");
  CHECK(normalize_lookup("#1") == "1");
}

TEST_CASE("unicode whitespace and letters") {
  // no-break space, ideographic space, em space
  const auto tokens = tokenize("a\xC2\xA0" "b\xE3\x80\x80" "c\xE2\x80\x83" "d");
  CHECK(surfaces(tokens) == std::vector<std::string>{"a", "b", "c", "d"});

  CHECK(lowercase("\xC3\x89T\xC3\x89") == "\xC3\xA9t\xC3\xA9");       // ÉTÉ -> été
  CHECK(lowercase("\xCE\xA3\xCE\x9F") == "\xCF\x83\xCE\xBF");         // ΣΟ -> σο
  CHECK(lowercase("\xD0\x9F\xD0\xA0") == "\xD0\xBF\xD1\x80");         // ПР -> пр
  // Devanagari has no case; the danda is punctuation.
  CHECK(normalize_lookup("\xE0\xA4\x85\xE0\xA4\x9A\xE0\xA5\x8D\xE0\xA4\x9B\xE0\xA4\xBE\xE0\xA5\xA4") ==
        "\xE0\xA4\x85\xE0\xA4\x9A\xE0\xA5\x8D\xE0\xA4\x9B\xE0\xA4\xBE");
  // Emoji are not word characters.
  CHECK(normalize_lookup("\xF0\x9F\x98\x80") == "");
  CHECK(normalize_lookup("mast\xF0\x9F\x98\x80") == "mast");
}

TEST_CASE("invalid utf-8 passes through") {
  const std::string bad = "ab\xFF" "cd";
  const auto tokens = tokenize(bad + " x");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].surface == bad);
}

TEST_CASE("token_types lists distinct words in first-appearance order") {
  const auto tokens = tokenize("Good movie, good songs !!! movie");
  CHECK(token_types(tokens) == std::vector<std::string>{"good", "movie", "songs"});
}

TEST_CASE("delete_tokens removes every occurrence of a type") {
  const auto tokens = tokenize("good movie good");
  CHECK(delete_tokens(tokens, {"good"}) == "movie");
  CHECK(delete_tokens(tokens, {}) == "good movie good");
  CHECK(delete_tokens(tokens, {"good", "movie", "extra"}) == "");
  CHECK(delete_tokens(tokens, {"absent"}) == "good movie good");

  // Case variants share a type; punctuation-only tokens are never targeted.
  const auto mixed = tokenize("Good ! good. movie");
  CHECK(delete_tokens(mixed, {"good"}) == "! movie");
  CHECK(delete_tokens(mixed, {""}) == "Good ! good. movie");
}

TEST_CASE("rejoining is idempotent under re-tokenization") {
  std::mt19937 rng(5);
  const char* pieces[] = {"a", "Bb", "c!", "...", "d\xC2\xA0", " ", "\t", "\n", "e-f"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) text += pieces[rng() % std::size(pieces)];
    const auto tokens = tokenize(text);
    const std::string rejoined = delete_tokens(tokens, {});
    CHECK(surfaces(tokenize(rejoined)) == surfaces(tokens));
    CHECK(tokenize(text) == tokens);
    for (std::size_t i = 1; i < tokens.size(); ++i) CHECK(tokens[i].position > tokens[i - 1].position);
    for (const auto& t : tokens) CHECK_FALSE(t.surface.empty());
  }
}
