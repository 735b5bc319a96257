#pragma once

// Numerical routines over frequency profiles: similarity, projection,
// diversity and significance testing.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gramprof/profile.hpp"

namespace gramprof {

// ------------------------------------------------------------- similarity

// Relative frequencies of two profiles over the sorted union of their
// supports, zero-filled.
struct AlignedVectors {
  std::vector<std::string> identifiers;
  std::vector<double> x;
  std::vector<double> y;
};

// Throws Error(kCategoryMismatch) / Error(kEmptyProfile).
AlignedVectors align(const FrequencyProfile& a, const FrequencyProfile& b);

// dot(x, y) / (|x| |y|), clamped to [0, 1] for non-negative inputs.
// Throws Error(kZeroVector) when either vector is all zero.
double cosine(std::span<const double> x, std::span<const double> y);
double cosine(const FrequencyProfile& a, const FrequencyProfile& b);

// ------------------------------------------------------------------ PCA

struct Pca2Result {
  std::vector<std::string> identifiers;             // column order of the axes
  std::vector<std::array<double, 2>> coordinates;   // one row per input profile
  std::array<std::vector<double>, 2> axes;          // unit loadings per component
  std::array<double, 2> explained_variance{};       // covariance eigenvalues, descending
  bool degenerate = false;                          // rank < 2: second coordinate is zero
};

// Rows are observations. Column-mean-centres, eigendecomposes the n x n Gram
// matrix with cyclic Jacobi rotations, and projects onto the top two
// principal axes. Each axis is oriented so its first loading with magnitude
// above 1e-9 * max |loading| is positive. Throws Error(kTooFewProfiles)
// for fewer than 3 rows and Error(kInvalidArgument) for ragged input.
Pca2Result pca2(const std::vector<std::vector<double>>& rows);

// Rows are the profiles' relative frequencies over the union of supports.
Pca2Result pca2(std::span<const FrequencyProfile> profiles);

// Symmetric eigendecomposition (cyclic Jacobi). Eigenvalues descending,
// eigenvectors as columns of `vectors` (row-major n x n).
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t n);

// ------------------------------------------------------------- diversity

struct DiversityScore {
  double shannon_h = 0.0;     // nats
  double gini_simpson = 0.0;  // 1 - sum p_i^2
};

// Natural-log Shannon entropy of the relative frequencies. Throws
// Error(kEmptyProfile) when total == 0.
double shannon(const FrequencyProfile& p);
double gini_simpson(const FrequencyProfile& p);
DiversityScore diversity(const FrequencyProfile& p);

// Same quantities over raw counts (zeros ignored); 0 for an all-zero vector.
double shannon_from_counts(std::span<const std::uint64_t> counts) noexcept;
double gini_simpson_from_counts(std::span<const std::uint64_t> counts) noexcept;

// ------------------------------------------------------- test results

struct StatTestResult {
  std::string key;        // identifier or "a vs b"
  double statistic = 0.0; // U for Mann-Whitney, observed difference for permutation tests
  double p_value = 1.0;
  std::optional<double> p_adjusted;
  std::string method;
};

// ------------------------------------------------------ permutation test

enum class DiversityStatistic { kShannonDiff, kGiniDiff };

// Sparse per-sentence counts: (type index, count) pairs; type indices must
// share one index space across both groups.
using SparseCounts = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct PermutationOptions {
  DiversityStatistic statistic = DiversityStatistic::kShannonDiff;
  std::size_t resamples = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0 = default_worker_count()
};

// Observed stat(a) - stat(b); the null distribution reassigns whole sentences
// to groups of the original sizes. Resample r draws from
// SplitMix64::stream(seed, r), so the result does not depend on the worker
// count. Two-sided p = (#{|null| >= |observed|} + 1) / (resamples + 1).
// Throws Error(kEmptyCorpus) when either group is empty or has no
// occurrences, Error(kInvalidArgument) when resamples == 0.
StatTestResult permutation_test(std::span<const SparseCounts> a, std::span<const SparseCounts> b,
                                const PermutationOptions& options);

// Interns category occurrences of two corpora into a shared index space.
std::pair<std::vector<SparseCounts>, std::vector<SparseCounts>> sentence_counts(
    const ClassifiedCorpus& a, const ClassifiedCorpus& b, Category category);

StatTestResult permutation_test(const ClassifiedCorpus& a, const ClassifiedCorpus& b,
                                Category category, const PermutationOptions& options);

// ------------------------------------------------------- Mann-Whitney U

enum class MwuMode { kAuto, kExact, kMonteCarlo };

inline constexpr std::size_t kMaxExactPooled = 12;

struct MwuOptions {
  MwuMode mode = MwuMode::kAuto;  // exact when the pooled size allows it
  std::uint64_t seed = 0;
  std::size_t reps = 10000;
};

// U = R_x - n_x (n_x + 1) / 2 with mid-ranks for ties. Two-sided p is the
// share of group assignments whose |U - n_x n_y / 2| is at least the
// observed one: by full enumeration (exact, pooled size <= 12) or by
// (extreme + 1) / (reps + 1) over random assignments.
// Throws Error(kEmptySample) / Error(kExactTooLarge).
StatTestResult mann_whitney(std::span<const double> xs, std::span<const double> ys,
                            const MwuOptions& options = {});

// ------------------------------------------------- Benjamini-Hochberg

struct AdjustedP {
  std::string key;
  double p_value = 0.0;
  double p_adjusted = 0.0;
};

// Step-up adjustment: over ascending p, adj(i) = min_{j >= i} m p(j) / j,
// clipped to 1; results in input order. `m` defaults to the number of
// p-values and may exceed it when only part of the comparisons is listed.
// Throws Error(kInvalidP) for p outside [0, 1] or NaN, Error(kInvalidArgument)
// for m smaller than the list.
std::vector<AdjustedP> bh_fdr(std::span<const std::pair<std::string, double>> pvalues,
                              std::optional<std::size_t> m = std::nullopt);

}  // namespace gramprof
