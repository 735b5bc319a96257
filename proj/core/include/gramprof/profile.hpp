#pragma once

// Per-corpus, per-category frequency profiles and the corpus-level
// operations around them: classification, sampling, author grouping and
// support comparisons.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gramprof/category.hpp"
#include "gramprof/derivation.hpp"
#include "gramprof/hierarchy.hpp"

namespace gramprof {

struct FrequencyProfile {
  std::string corpus_id;
  Category category = Category::kAll;
  std::map<std::string, std::uint64_t, std::less<>> counts;
  std::uint64_t total = 0;
  std::uint64_t sentence_count = 0;

  std::uint64_t count(std::string_view id) const noexcept;
  // counts[id] / total; 0 for absent identifiers. Throws Error(kEmptyProfile)
  // when total == 0.
  double rel_freq(std::string_view id) const;
  std::map<std::string, double, std::less<>> rel_freqs() const;
  std::size_t support_size() const noexcept { return counts.size(); }

  void add(std::string_view id, std::uint64_t n = 1);
};

// Sum of counts and sentence counts; associative and commutative. Throws
// Error(kCategoryMismatch).
FrequencyProfile merge_profiles(const FrequencyProfile& a, const FrequencyProfile& b);

// CSV: identifier,count,rel_freq (rel_freq with 6 decimals), rows sorted by
// identifier.
void write_profile_csv(const FrequencyProfile& profile, std::ostream& out);

// ---------------------------------------------------------------------------
// Classified corpora: labels interned once, sentences as label-id lists.

struct LabelInfo {
  std::string label;
  Category category = Category::kUnknown;
  // Index (into ClassifiedCorpus::labels) of the lexical type an entry
  // instantiates, when the hierarchy knows it.
  std::optional<std::uint32_t> lexical_type;
};

struct ClassifiedSentence {
  std::string item_id;
  std::optional<std::string> author;
  std::vector<std::uint32_t> labels;  // occurrence order
};

struct ClassifiedCorpus {
  std::string corpus_id;
  std::vector<LabelInfo> labels;
  std::vector<ClassifiedSentence> sentences;  // natural item order

  std::size_t occurrence_count() const noexcept;
};

ClassifiedCorpus classify_corpus(std::string_view corpus_id,
                                 std::span<const SentenceRecord> records, const TypeHierarchy& h);

// Occurrences of each sentence that fall into `category`, as label strings.
// Lexical-type occurrences come from labels classified as lexical types plus
// the lexical type of every entry occurrence; kAll keeps every label once.
std::vector<std::string_view> category_occurrences(const ClassifiedCorpus& corpus,
                                                   const ClassifiedSentence& sentence,
                                                   Category category);

// Profile over all sentences, or over the given sentence indices.
FrequencyProfile profile_of(const ClassifiedCorpus& corpus, Category category);
FrequencyProfile profile_of(const ClassifiedCorpus& corpus, Category category,
                            std::span<const std::size_t> sentence_indices);

// Classifies and aggregates in one step. Throws Error(kEmptyCorpus).
FrequencyProfile build_profile(std::span<const SentenceRecord> records, const TypeHierarchy& h,
                               Category category);

// ---------------------------------------------------------------------------
// Sampling

struct SamplePlan {
  std::size_t sample_size = 1;
  std::uint64_t seed = 0;
  bool replacement = false;
};

// Indices into a population of `population` items, ascending. Without
// replacement: the first k slots of a forward partial Fisher-Yates shuffle
// (slot i swaps with i + below(n - i)). With replacement: k draws of
// below(n). Throws Error(kInvalidSamplePlan) / Error(kSampleTooLarge).
std::vector<std::size_t> sample_indices(std::size_t population, const SamplePlan& plan);

// Sorts by (corpus_id, item_id) first, so the result does not depend on input
// order.
std::vector<SentenceRecord> sample_corpus(std::span<const SentenceRecord> records,
                                          const SamplePlan& plan);

ClassifiedCorpus sample_sentences(const ClassifiedCorpus& corpus, const SamplePlan& plan);

// Concatenates corpora under a new id; labels are re-interned, item ids are
// prefixed with "<source corpus>/".
ClassifiedCorpus pool_corpora(std::string_view corpus_id,
                              std::span<const ClassifiedCorpus* const> corpora);

// ---------------------------------------------------------------------------
// Authors

// Authors with at least `min_sentences` sentences; records without author are
// dropped. Throws Error(kNoAuthorsFound) when nothing remains.
std::map<std::string, std::vector<SentenceRecord>> group_by_author(
    std::span<const SentenceRecord> records, std::size_t min_sentences);

// Same grouping over a classified corpus, as sentence indices.
std::map<std::string, std::vector<std::size_t>> author_groups(const ClassifiedCorpus& corpus,
                                                              std::size_t min_sentences);

// ---------------------------------------------------------------------------
// Support comparisons

struct RankedItem {
  std::string identifier;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
};

// Identifiers with count(a) >= min_count_a and count(b) <= max_count_b, by
// count_a descending then identifier. Throws Error(kCategoryMismatch).
std::vector<RankedItem> diff_items(const FrequencyProfile& a, const FrequencyProfile& b,
                                   std::uint64_t min_count_a, std::uint64_t max_count_b);

struct SupportComparison {
  std::size_t not_in = 0;   // in the reference profile only
  std::size_t only_in = 0;  // in the other profile only
  std::size_t shared = 0;
};

// not_in_only_in(human, llm): identifiers used by humans but not the model,
// and vice versa. Throws Error(kCategoryMismatch).
SupportComparison not_in_only_in(const FrequencyProfile& reference, const FrequencyProfile& other);

}  // namespace gramprof
