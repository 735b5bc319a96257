#pragma once

// Report assembly over precomputed profiles and deterministic emission as
// CSV, JSON or an SVG scatter plot. Layouts are described in FORMATS.md.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gramprof/profile.hpp"
#include "gramprof/stats.hpp"

namespace gramprof {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { kCsv, kJson, kSvgScatter };

std::string_view to_string(ReportFormat f) noexcept;
// "csv", "json", "svg" / "svg-scatter". Throws Error(kUnsupportedFormat).
ReportFormat parse_report_format(std::string_view name);

// ------------------------------------------------------------ comparison

struct SimilarityPair {
  std::string a;
  std::string b;
  double cosine = 0.0;
};

struct ComparisonReport {
  Category category = Category::kAll;
  std::vector<std::string> corpora;
  std::vector<std::vector<double>> matrix;  // symmetric, diagonal exactly 1
  std::vector<SimilarityPair> pairs;        // strict upper triangle, cosine descending
  std::optional<Pca2Result> pca;            // present for >= 3 profiles
};

// Throws Error(kTooFewProfiles) below 2 profiles; stats errors propagate.
ComparisonReport build_comparison(std::span<const FrequencyProfile> profiles, Category category);

// ------------------------------------------------------------- frequency

struct FrequencyRow {
  std::string identifier;
  std::uint64_t pooled_count = 0;
  std::vector<double> human_rel;   // one per human profile
  std::vector<double> llm_rel;     // one per llm profile
  std::vector<double> human_rate;  // occurrences per sentence
  std::vector<double> llm_rate;
  double human_mean = 0.0;
  double llm_mean = 0.0;
  int direction = 0;  // +1 humans use it more, -1 models use it more
};

struct FrequencyComparison {
  Category category = Category::kAll;
  std::vector<std::string> humans;
  std::vector<std::string> llms;
  std::vector<FrequencyRow> rows;  // pooled count descending, then identifier
};

// Keeps the top_k identifiers by pooled count over all profiles.
// Throws Error(kCategoryMismatch), Error(kTooFewProfiles) when a side is
// empty, Error(kInvalidArgument) for top_k == 0.
FrequencyComparison build_frequency_comparison(std::span<const FrequencyProfile> humans,
                                               std::span<const FrequencyProfile> llms,
                                               std::size_t top_k);

// -------------------------------------------------------------- pairwise

// How the four category blocks are weighted in an all-category vector.
enum class AllNormalization { kBlock, kGlobal };

std::string_view to_string(AllNormalization n) noexcept;
std::optional<AllNormalization> parse_all_normalization(std::string_view name) noexcept;

// The four core-category profiles of one corpus, indexed by Category value.
struct ProfileBundle {
  std::string id;
  std::array<FrequencyProfile, 4> by_category;

  const FrequencyProfile& operator[](Category c) const;
};

ProfileBundle bundle_of(const ClassifiedCorpus& corpus, std::string id = {});
ProfileBundle bundle_of(const ClassifiedCorpus& corpus, std::span<const std::size_t> sentences,
                        std::string id);

// Cosine between two bundles for one core category, or over all four blocks:
// kBlock gives every block unit mass, kGlobal weights blocks by their share
// of the bundle's occurrences. Throws Error(kZeroVector).
double bundle_cosine(const ProfileBundle& a, const ProfileBundle& b, Category category,
                     AllNormalization normalization = AllNormalization::kBlock);

struct PairwiseGroup {
  std::string name;  // human-human, human-llm, llm-llm
  std::vector<SimilarityPair> pairs;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double variance = 0.0;  // sample variance (n - 1); 0 for a single pair
};

struct PairwiseVarianceReport {
  Category category = Category::kAll;
  AllNormalization normalization = AllNormalization::kBlock;
  std::vector<std::string> humans;
  std::vector<std::string> llms;
  std::array<PairwiseGroup, 3> groups;
};

// Throws Error(kTooFewProfiles) unless both sides have >= 2 bundles.
PairwiseVarianceReport build_pairwise_variance(std::span<const ProfileBundle> humans,
                                               std::span<const ProfileBundle> llms,
                                               Category category,
                                               AllNormalization normalization);

// ------------------------------------------------------------- diversity

struct DiversityRow {
  std::string corpus_id;
  std::uint64_t sentences = 0;
  std::uint64_t occurrences = 0;
  std::size_t support = 0;
  DiversityScore score;
};

struct DiversityReport {
  Category category = Category::kAll;
  std::vector<DiversityRow> rows;      // input order
  std::vector<StatTestResult> tests;   // permutation tests, if any
};

DiversityReport build_diversity_report(std::span<const FrequencyProfile> profiles,
                                       Category category);

// ---------------------------------------------------------- significance

struct SignificanceOptions {
  MwuOptions mwu;
  std::optional<std::size_t> m;  // BH family size; default = number of tested identifiers
  double alpha = 0.05;
  std::vector<std::string> only;  // restrict tested identifiers; empty = union of supports
};

struct SignificanceRow {
  std::string identifier;
  std::vector<double> a_values;
  std::vector<double> b_values;
  double u = 0.0;
  double p_value = 1.0;
  double p_adjusted = 1.0;
};

struct SignificanceReport {
  Category category = Category::kAll;
  std::vector<std::string> group_a;
  std::vector<std::string> group_b;
  std::size_t m = 0;
  double alpha = 0.05;
  std::string method;
  std::vector<SignificanceRow> rows;  // identifier order

  std::size_t raw_significant() const noexcept;
  std::size_t adjusted_significant() const noexcept;
};

// Per identifier, a Mann-Whitney U test of group a's relative frequencies
// against group b's, then BH over the tested identifiers. Monte Carlo seeds
// are derived from (seed, identifier). Throws Error(kEmptySample),
// Error(kCategoryMismatch), Error(kInvalidArgument) for alpha outside (0, 1).
SignificanceReport build_significance(std::span<const FrequencyProfile> group_a,
                                      std::span<const FrequencyProfile> group_b,
                                      const SignificanceOptions& options);

// -------------------------------------------------------------- unique

struct UniqueComparison {
  std::string reference;
  std::string other;
  SupportComparison support;
  std::vector<RankedItem> reference_only;  // diff_items(reference, other, ...)
  std::vector<RankedItem> other_only;      // diff_items(other, reference, ...)
};

struct UniqueItemsReport {
  Category category = Category::kAll;
  std::uint64_t min_count = 1;
  std::uint64_t max_other_count = 0;
  std::vector<UniqueComparison> comparisons;
};

// One comparison per `others` entry against `reference`; item lists keep at
// most top_k rows (0 = all).
UniqueItemsReport build_unique_items(const FrequencyProfile& reference,
                                     std::span<const FrequencyProfile> others,
                                     std::uint64_t min_count, std::uint64_t max_other_count,
                                     std::size_t top_k);

// ------------------------------------------------------------- emission

// Throws Error(kUnsupportedFormat) when the report has no such rendering.
void emit(const ComparisonReport& r, ReportFormat f, std::ostream& out);
void emit(const FrequencyComparison& r, ReportFormat f, std::ostream& out);
void emit(const PairwiseVarianceReport& r, ReportFormat f, std::ostream& out);
void emit(const DiversityReport& r, ReportFormat f, std::ostream& out);
void emit(const SignificanceReport& r, ReportFormat f, std::ostream& out);
void emit(const UniqueItemsReport& r, ReportFormat f, std::ostream& out);

// Full cosine matrix as CSV: header "corpus,<id>...", one row per corpus.
void emit_matrix_csv(const ComparisonReport& r, std::ostream& out);

// key,statistic,p_value,p_adjusted,method
void emit_tests_csv(std::span<const StatTestResult> tests, std::ostream& out);

// reference,other,not_in,only_in,shared
void emit_support_csv(const UniqueItemsReport& r, std::ostream& out);

// Writes to a file, creating parent directories. Throws Error(kIo).
template <typename Report>
void emit_file(const Report& r, ReportFormat f, const std::filesystem::path& path);

}  // namespace gramprof
