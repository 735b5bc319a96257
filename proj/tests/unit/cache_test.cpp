#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "gramprof/cache.hpp"
#include "gramprof/error.hpp"

namespace gramprof {
namespace {

CorpusCache fixture_cache() {
  CorpusCache c;
  c.grammar_checksum = testing::fixture_grammar().checksum();
  c.source_checksum = file_checksum(testing::fixture("fixture_human.jsonl"));
  c.role = CorpusRole::kHuman;
  c.format = "jsonl";
  c.source_path = "fixture_human.jsonl";
  c.skipped_lines = 2;
  c.corpus = classify_corpus("nyt", testing::fixture_human(), testing::fixture_grammar());
  return c;
}

void expect_same(const CorpusCache& a, const CorpusCache& b) {
  EXPECT_EQ(a.grammar_checksum, b.grammar_checksum);
  EXPECT_EQ(a.source_checksum, b.source_checksum);
  EXPECT_EQ(a.role, b.role);
  EXPECT_EQ(a.format, b.format);
  EXPECT_EQ(a.source_path, b.source_path);
  EXPECT_EQ(a.skipped_lines, b.skipped_lines);
  EXPECT_EQ(a.corpus.corpus_id, b.corpus.corpus_id);
  ASSERT_EQ(a.corpus.labels.size(), b.corpus.labels.size());
  for (std::size_t i = 0; i < a.corpus.labels.size(); ++i) {
    EXPECT_EQ(a.corpus.labels[i].label, b.corpus.labels[i].label);
    EXPECT_EQ(a.corpus.labels[i].category, b.corpus.labels[i].category);
    EXPECT_EQ(a.corpus.labels[i].lexical_type, b.corpus.labels[i].lexical_type);
  }
  ASSERT_EQ(a.corpus.sentences.size(), b.corpus.sentences.size());
  for (std::size_t i = 0; i < a.corpus.sentences.size(); ++i) {
    EXPECT_EQ(a.corpus.sentences[i].item_id, b.corpus.sentences[i].item_id);
    EXPECT_EQ(a.corpus.sentences[i].author, b.corpus.sentences[i].author);
    EXPECT_EQ(a.corpus.sentences[i].labels, b.corpus.sentences[i].labels);
  }
}

TEST(Cache, RoundTrip) {
  const CorpusCache c = fixture_cache();
  const std::string bytes = encode_cache(c);
  EXPECT_EQ(bytes.substr(0, 8), std::string("GPCACHE\0", 8));
  expect_same(decode_cache(bytes), c);
  EXPECT_EQ(encode_cache(decode_cache(bytes)), bytes);
}

TEST(Cache, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "gramprof_cache_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  const CorpusCache c = fixture_cache();
  write_cache(c, dir / "nyt.gpc");
  expect_same(read_cache(dir / "nyt.gpc"), c);
  std::filesystem::remove_all(dir.parent_path());
}

TEST(Cache, MissingFile) {
  try {
    read_cache("/nonexistent/x.gpc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingCache);
  }
}

TEST(Cache, EveryFlippedByteIsRejected) {
  const std::string bytes = encode_cache(fixture_cache());
  for (std::size_t i = 0; i < bytes.size(); i += 37) {
    std::string bad = bytes;
    bad[i] = static_cast<char>(bad[i] ^ 0x5a);
    try {
      decode_cache(bad);
      ADD_FAILURE() << "corruption at byte " << i << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormat);
    }
  }
}

TEST(Cache, TruncationIsRejected) {
  const std::string bytes = encode_cache(fixture_cache());
  for (std::size_t len : {std::size_t{0}, std::size_t{7}, std::size_t{20}, bytes.size() - 1}) {
    EXPECT_THROW(decode_cache(std::string_view(bytes).substr(0, len)), Error) << len;
  }
}

TEST(Cache, ProfilesSurviveRoundTrip) {
  const CorpusCache c = fixture_cache();
  const CorpusCache back = decode_cache(encode_cache(c));
  for (Category cat : kCoreCategories) {
    const auto a = profile_of(c.corpus, cat);
    const auto b = profile_of(back.corpus, cat);
    EXPECT_EQ(a.total, b.total);
    EXPECT_TRUE(std::equal(a.counts.begin(), a.counts.end(), b.counts.begin(), b.counts.end()));
  }
}

TEST(CorpusRoleNames, RoundTrip) {
  EXPECT_EQ(parse_corpus_role("human"), CorpusRole::kHuman);
  EXPECT_EQ(parse_corpus_role("llm"), CorpusRole::kLlm);
  EXPECT_FALSE(parse_corpus_role("robot"));
  EXPECT_EQ(to_string(CorpusRole::kLlm), "llm");
}

}  // namespace
}  // namespace gramprof
