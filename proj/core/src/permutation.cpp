#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "gramprof/error.hpp"
#include "gramprof/parallel.hpp"
#include "gramprof/rng.hpp"
#include "gramprof/stats.hpp"

namespace gramprof {
namespace {

double statistic_of(DiversityStatistic s, std::span<const std::uint64_t> counts) {
  return s == DiversityStatistic::kShannonDiff ? shannon_from_counts(counts)
                                               : gini_simpson_from_counts(counts);
}

std::string_view method_name(DiversityStatistic s) {
  return s == DiversityStatistic::kShannonDiff ? "permutation-shannon" : "permutation-gini-simpson";
}

void accumulate(const SparseCounts& sentence, std::vector<std::uint64_t>& counts) {
  for (const auto& [type, c] : sentence) counts[type] += c;
}

}  // namespace

StatTestResult permutation_test(std::span<const SparseCounts> a, std::span<const SparseCounts> b,
                                const PermutationOptions& options) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "permutation test needs two non-empty groups");
  }
  if (options.resamples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "permutation test needs at least one resample");
  }

  std::vector<const SparseCounts*> pooled;
  pooled.reserve(a.size() + b.size());
  std::uint32_t types = 0;
  for (const auto* group : {&a, &b}) {
    for (const auto& s : *group) {
      pooled.push_back(&s);
      for (const auto& [type, c] : s) types = std::max(types, type + 1);
    }
  }

  std::vector<std::uint64_t> total(types, 0);
  std::vector<std::uint64_t> counts_a(types, 0);
  for (const auto& s : a) accumulate(s, counts_a);
  for (const auto* s : pooled) accumulate(*s, total);
  std::vector<std::uint64_t> counts_b(types);
  for (std::uint32_t t = 0; t < types; ++t) counts_b[t] = total[t] - counts_a[t];

  const auto occurrences = [](const std::vector<std::uint64_t>& v) {
    return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
  };
  if (occurrences(counts_a) == 0 || occurrences(counts_b) == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "a group has no occurrences in this category");
  }

  const double observed =
      statistic_of(options.statistic, counts_a) - statistic_of(options.statistic, counts_b);
  const double threshold = std::abs(observed) - 1e-12 * std::max(1.0, std::abs(observed));

  // The smaller group is drawn; the other is the pooled remainder.
  const std::size_t n = pooled.size();
  const bool draw_a = a.size() <= b.size();
  const std::size_t k = draw_a ? a.size() : b.size();

  const unsigned workers = options.workers == 0 ? default_worker_count() : options.workers;
  std::vector<std::size_t> extreme_per_worker(std::max(1u, workers), 0);
  parallel_chunks(options.resamples, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    std::vector<std::size_t> slots(n);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    std::vector<std::size_t> swaps(k);
    std::vector<std::uint64_t> drawn(types);
    std::vector<std::uint64_t> rest(types);
    std::size_t extreme = 0;
    for (std::size_t r = begin; r < end; ++r) {
      SplitMix64 rng = SplitMix64::stream(options.seed, r);
      std::fill(drawn.begin(), drawn.end(), 0);
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(slots[i], slots[j]);
        swaps[i] = j;
        accumulate(*pooled[slots[i]], drawn);
      }
      // Undo the swaps so every resample starts from the identity order.
      for (std::size_t i = k; i-- > 0;) std::swap(slots[i], slots[swaps[i]]);

      for (std::uint32_t t = 0; t < types; ++t) rest[t] = total[t] - drawn[t];
      const double sd = statistic_of(options.statistic, drawn);
      const double sr = statistic_of(options.statistic, rest);
      const double null = draw_a ? sd - sr : sr - sd;
      if (std::abs(null) >= threshold) ++extreme;
    }
    extreme_per_worker[w] = extreme;
  });

  const std::size_t extreme =
      std::accumulate(extreme_per_worker.begin(), extreme_per_worker.end(), std::size_t{0});
  StatTestResult out;
  out.statistic = observed;
  out.p_value = static_cast<double>(extreme + 1) / static_cast<double>(options.resamples + 1);
  out.method = std::string(method_name(options.statistic));
  return out;
}

std::pair<std::vector<SparseCounts>, std::vector<SparseCounts>> sentence_counts(
    const ClassifiedCorpus& a, const ClassifiedCorpus& b, Category category) {
  std::map<std::string_view, std::uint32_t> index;
  for (const auto* corpus : {&a, &b}) {
    for (const auto& s : corpus->sentences) {
      for (auto label : category_occurrences(*corpus, s, category)) index.emplace(label, 0);
    }
  }
  std::uint32_t next = 0;
  for (auto& [label, id] : index) id = next++;

  const auto convert = [&](const ClassifiedCorpus& corpus) {
    std::vector<SparseCounts> out;
    out.reserve(corpus.sentences.size());
    for (const auto& s : corpus.sentences) {
      std::map<std::uint32_t, std::uint32_t> local;
      for (auto label : category_occurrences(corpus, s, category)) ++local[index.at(label)];
      out.emplace_back(local.begin(), local.end());
    }
    return out;
  };
  return {convert(a), convert(b)};
}

StatTestResult permutation_test(const ClassifiedCorpus& a, const ClassifiedCorpus& b,
                                Category category, const PermutationOptions& options) {
  const auto [ca, cb] = sentence_counts(a, b, category);
  StatTestResult out = permutation_test(ca, cb, options);
  out.key = a.corpus_id + " vs " + b.corpus_id;
  return out;
}

}  // namespace gramprof
