#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mixlens/dataset.hpp"
#include "mixlens/errors.hpp"
#include "mixlens/vocabulary.hpp"

using namespace mixlens;

namespace {

LoadResult load_tsv(const std::string& content, const LoadOptions& options = {}) {
  std::istringstream in(content);
  return load_dataset(in, TableFormat::tsv, "mem", options);
}

LoadResult load_csv(const std::string& content, const LoadOptions& options = {}) {
  std::istringstream in(content);
  return load_dataset(in, TableFormat::csv, "mem", options);
}

}  // namespace

TEST_CASE("two-row tsv with sorted class names") {
  const auto r = load_tsv("text\tlabel\ngood\tpositive\nbad\tnegative\n");
  const Dataset& d = r.dataset;
  REQUIRE(d.instances.size() == 2);
  CHECK(d.class_names == std::vector<std::string>{"negative", "positive"});
  CHECK(d.instances[0].id == "0");
  CHECK(d.instances[1].id == "1");
  CHECK(d.instances[0].label == "positive");
  CHECK(d.instances[1].tokens == tokenize("bad"));
  CHECK(d.class_index("positive") == 1u);
  CHECK_FALSE(d.class_index("neutral").has_value());
  CHECK(r.rejected_rows == 0);
}

TEST_CASE("header-only file gives an empty dataset with a warning") {
  const auto r = load_tsv("text\tlabel\n");
  CHECK(r.dataset.instances.empty());
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("id column, optional labels and column order") {
  const auto r = load_tsv("label\tid\ttext\r\npositive\ta7\tAccha movie!\r\n\tb2\tkya hai\r\n");
  REQUIRE(r.dataset.instances.size() == 2);
  CHECK(r.dataset.instances[0].id == "a7");
  CHECK(r.dataset.instances[0].text == "Accha movie!");
  CHECK_FALSE(r.dataset.instances[1].label.has_value());
  CHECK(r.dataset.class_names == std::vector<std::string>{"positive"});
}

TEST_CASE("empty text rows are rejected and counted; ids keep row numbering") {
  const auto r = load_tsv("text\tlabel\ngood\tpositive\n \tnegative\nbad\tnegative\n");
  CHECK(r.rejected_rows == 1);
  REQUIRE(r.dataset.instances.size() == 2);
  CHECK(r.dataset.instances[1].id == "2");
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("format errors") {
  CHECK_THROWS_AS(load_tsv("sentence\tlabel\nx\ty\n"), FormatError);
  CHECK_THROWS_AS(load_tsv(""), FormatError);
  CHECK_THROWS_AS(load_tsv("id\ttext\n1\ta\n1\tb\n"), FormatError);
  CHECK_THROWS_AS(load_tsv("text\tlabel\na\tb\tc\n"), FormatError);
  LoadOptions declared;
  declared.class_names = std::vector<std::string>{"negative", "positive"};
  CHECK_THROWS_AS(load_tsv("text\tlabel\na\tneutral\n", declared), FormatError);
  declared.class_names = std::vector<std::string>{"x", "x"};
  CHECK_THROWS_AS(load_tsv("text\n", declared), InputError);
  CHECK_THROWS_AS(load_dataset(std::filesystem::path("/nonexistent/data.tsv"), TableFormat::tsv),
                  IoError);
}

TEST_CASE("declared classes keep their order") {
  LoadOptions opt;
  opt.class_names = std::vector<std::string>{"positive", "neutral", "negative"};
  const auto r = load_tsv("text\tlabel\ngood\tpositive\n", opt);
  CHECK(r.dataset.class_names == *opt.class_names);
}

TEST_CASE("csv quoting, embedded newlines and BOM") {
  const auto r = load_csv(
      "\xEF\xBB\xBFtext,label\n"
      "\"good, really \"\"good\"\"\",positive\n"
      "\"two\nlines\",negative\n"
      "plain,negative\n");
  REQUIRE(r.dataset.instances.size() == 3);
  CHECK(r.dataset.instances[0].text == "good, really \"good\"");
  CHECK(r.dataset.instances[1].text == "two\nlines");
  CHECK(r.dataset.instances[1].tokens.size() == 2);
  CHECK(r.dataset.instances[2].id == "2");
}

TEST_CASE("table format from extension") {
  CHECK(table_format_for("a/b.csv") == TableFormat::csv);
  CHECK(table_format_for("a/b.CSV") == TableFormat::csv);
  CHECK(table_format_for("a/b.tsv") == TableFormat::tsv);
  CHECK(table_format_for("a/b.txt") == TableFormat::tsv);
}

TEST_CASE("vocabulary loading") {
  {
    std::istringstream in("good\nmovie\n");
    const auto v = load_vocab(in, "mem");
    CHECK(v.entries() == TokenSet{"good", "movie"});
  }
  {
    std::istringstream in("Good\r\n\r\nMOVIE 0.1 0.2\n");
    const auto v = load_vocab(in, "mem");
    CHECK(v.entries() == TokenSet{"good", "movie"});
  }
  {
    std::istringstream in("");
    CHECK(load_vocab(in, "mem").empty());
  }
  CHECK_THROWS_AS(load_vocab(std::filesystem::path("/nonexistent/vocab.txt")), IoError);
}

TEST_CASE("code-mixed detection") {
  const Vocabulary vocab("toy", {"movie", "good"});
  const auto tokens = tokenize("Accha movie !!! GOOD");
  CHECK(is_code_mixed(tokens[0], vocab));
  CHECK_FALSE(is_code_mixed(tokens[1], vocab));
  CHECK_FALSE(is_code_mixed(tokens[2], vocab));
  CHECK_FALSE(is_code_mixed(tokens[3], vocab));
  CHECK(classify_token(tokens[2], vocab) == TokenClass::punctuation);

  // An empty vocabulary makes every word code-mixed.
  const Vocabulary empty;
  CHECK(is_code_mixed(tokens[1], empty));
  CHECK_FALSE(is_code_mixed(tokens[2], empty));
}

TEST_CASE("bundled toy vocabulary") {
  const auto vocab = load_vocab(testing::data_dir() / "toy_glove.vocab");
  CHECK(vocab.size() > 100);
  CHECK_FALSE(vocab.contains("accha"));
  CHECK(vocab.contains("movie"));
  for (const auto& w : vocab.entries()) CHECK(w == lowercase(w));
}
