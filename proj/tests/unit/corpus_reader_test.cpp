#include <gtest/gtest.h>

#include <string>

#include "gramprof/derivation.hpp"
#include "gramprof/error.hpp"

namespace gramprof {
namespace {

constexpr const char* kLeaf = "(1 cat_n1 0.0 0 1 (\"cat\"))";

TEST(ReadCorpus, UdfLinesTakeCorpusIdFromOptions) {
  ReadOptions o;
  o.corpus_id = "wsj";
  const std::string text = std::string(kLeaf) + "\n" + kLeaf + "\n";
  const CorpusReadResult r = read_corpus_text(text, o);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].corpus_id, "wsj");
  EXPECT_EQ(r.records[1].corpus_id, "wsj");
  EXPECT_EQ(r.records[0].item_id, "1");
  EXPECT_EQ(r.records[1].item_id, "2");
  EXPECT_FALSE(r.records[0].author);
}

TEST(ReadCorpus, UdfItemPrefixAndComments) {
  ReadOptions o;
  o.corpus_id = "c";
  const std::string text = std::string("# header\n\n20\t") + kLeaf + "\n3\t" + kLeaf + "\n";
  const CorpusReadResult r = read_corpus_text(text, o);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].item_id, "3");
  EXPECT_EQ(r.records[1].item_id, "20");
}

TEST(ReadCorpus, JsonlWithAuthor) {
  ReadOptions o;
  o.format = CorpusFormat::kJsonl;
  const std::string line =
      R"j({"corpus":"nyt","item":"7","author":"A. Smith","deriv":"(1 cat_n1 0.0 0 1 (\"cat\"))"})j";
  const CorpusReadResult r = read_corpus_text(line + "\n", o);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].corpus_id, "nyt");
  EXPECT_EQ(r.records[0].item_id, "7");
  ASSERT_TRUE(r.records[0].author);
  EXPECT_EQ(*r.records[0].author, "A. Smith");
  EXPECT_EQ(r.records[0].derivation.label, "cat_n1");
}

TEST(ReadCorpus, JsonlCorpusIdOverride) {
  ReadOptions o;
  o.format = CorpusFormat::kJsonl;
  o.corpus_id = "x";
  const std::string line = R"j({"corpus":"nyt","item":"1","deriv":"(1 a_1 0 1 (\"a\"))"})j";
  EXPECT_EQ(read_corpus_text(line, o).records[0].corpus_id, "x");
}

TEST(ReadCorpus, StrictFailsWithLine) {
  ReadOptions o;
  o.corpus_id = "c";
  const std::string text = std::string(kLeaf) + "\n(1 x 0.0 0 1 (\"a\")\n";
  try {
    read_corpus_text(text, o, "bad.udf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
    EXPECT_EQ(e.where().line, 2u);
    EXPECT_EQ(e.where().file, "bad.udf");
  }
}

TEST(ReadCorpus, LenientSkips) {
  ReadOptions o;
  o.corpus_id = "c";
  o.lenient = true;
  const std::string text = std::string(kLeaf) + "\n(1 x 0.0 0 1 (\"a\")\n" + kLeaf + "\n";
  const CorpusReadResult r = read_corpus_text(text, o);
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].line, 2u);
}

TEST(ReadCorpus, DuplicateItemsAlwaysFatal) {
  ReadOptions o;
  o.corpus_id = "c";
  o.lenient = true;
  const std::string text = std::string("1\t") + kLeaf + "\n1\t" + kLeaf + "\n";
  try {
    read_corpus_text(text, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateItemId);
  }
}

TEST(ReadCorpus, MissingFile) {
  ReadOptions o;
  o.corpus_id = "c";
  try {
    read_corpus("/nonexistent/corpus.udf", o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(ReadCorpus, WorkerCountDoesNotMatter) {
  std::string text;
  for (int i = 0; i < 200; ++i) {
    text += std::to_string(200 - i) + "\t(1 w" + std::to_string(i % 7) + " 0 0 1 (\"w\"))\n";
  }
  ReadOptions one;
  one.corpus_id = "c";
  one.workers = 1;
  ReadOptions four = one;
  four.workers = 4;
  const auto a = read_corpus_text(text, one).records;
  const auto b = read_corpus_text(text, four).records;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].item_id, b[i].item_id);
    EXPECT_EQ(a[i].derivation, b[i].derivation);
  }
  EXPECT_EQ(a.front().item_id, "1");
}

TEST(ItemOrder, NumericBeforeText) {
  EXPECT_TRUE(item_id_less("2", "10"));
  EXPECT_FALSE(item_id_less("10", "2"));
  EXPECT_TRUE(item_id_less("99", "a"));
  EXPECT_TRUE(item_id_less("a", "b"));
}

TEST(CorpusFormatNames, RoundTrip) {
  EXPECT_EQ(parse_corpus_format("jsonl"), CorpusFormat::kJsonl);
  EXPECT_EQ(parse_corpus_format("udf-lines"), CorpusFormat::kUdfLines);
  EXPECT_FALSE(parse_corpus_format("xml"));
  EXPECT_EQ(to_string(CorpusFormat::kJsonl), "jsonl");
}

}  // namespace
}  // namespace gramprof
