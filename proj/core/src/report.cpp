#include "gramprof/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gramprof/error.hpp"
#include "gramprof/rng.hpp"

namespace gramprof {
namespace {

void require_category(const FrequencyProfile& p, Category category) {
  if (p.category != category) {
    throw Error(ErrorCode::kCategoryMismatch, "profile '" + p.corpus_id + "' is " +
                                                  std::string(to_string(p.category)) +
                                                  ", expected " +
                                                  std::string(to_string(category)));
  }
}

double rate(const FrequencyProfile& p, std::string_view id) {
  if (p.sentence_count == 0) return 0.0;
  return static_cast<double>(p.count(id)) / static_cast<double>(p.sentence_count);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

PairwiseGroup summarise(std::string name, std::vector<SimilarityPair> pairs) {
  PairwiseGroup g;
  g.name = std::move(name);
  g.pairs = std::move(pairs);
  if (g.pairs.empty()) return g;
  g.min = std::numeric_limits<double>::infinity();
  g.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& p : g.pairs) {
    sum += p.cosine;
    g.min = std::min(g.min, p.cosine);
    g.max = std::max(g.max, p.cosine);
  }
  g.mean = sum / static_cast<double>(g.pairs.size());
  if (g.pairs.size() > 1) {
    double ss = 0.0;
    for (const auto& p : g.pairs) ss += (p.cosine - g.mean) * (p.cosine - g.mean);
    g.variance = ss / static_cast<double>(g.pairs.size() - 1);
  }
  return g;
}

std::size_t category_slot(Category c) {
  const auto i = static_cast<std::size_t>(c);
  if (i >= 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "no profile slot for category " + std::string(to_string(c)));
  }
  return i;
}

}  // namespace

// ------------------------------------------------------------ comparison

ComparisonReport build_comparison(std::span<const FrequencyProfile> profiles, Category category) {
  if (profiles.size() < 2) {
    throw Error(ErrorCode::kTooFewProfiles, "a comparison needs at least 2 profiles");
  }
  for (const auto& p : profiles) require_category(p, category);

  const std::size_t n = profiles.size();
  ComparisonReport r;
  r.category = category;
  r.matrix.assign(n, std::vector<double>(n, 1.0));
  for (const auto& p : profiles) r.corpora.push_back(p.corpus_id);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = cosine(profiles[i], profiles[j]);
      r.matrix[i][j] = c;
      r.matrix[j][i] = c;
      r.pairs.push_back(SimilarityPair{r.corpora[i], r.corpora[j], c});
    }
  }
  std::stable_sort(r.pairs.begin(), r.pairs.end(),
                   [](const SimilarityPair& x, const SimilarityPair& y) {
                     return x.cosine > y.cosine;
                   });
  if (n >= 3) r.pca = pca2(profiles);
  return r;
}

// ------------------------------------------------------------- frequency

FrequencyComparison build_frequency_comparison(std::span<const FrequencyProfile> humans,
                                               std::span<const FrequencyProfile> llms,
                                               std::size_t top_k) {
  if (humans.empty() || llms.empty()) {
    throw Error(ErrorCode::kTooFewProfiles, "frequency comparison needs human and llm profiles");
  }
  if (top_k == 0) throw Error(ErrorCode::kInvalidArgument, "top_k must be at least 1");
  const Category category = humans.front().category;
  std::map<std::string, std::uint64_t, std::less<>> pooled;
  for (const auto* side : {&humans, &llms}) {
    for (const auto& p : *side) {
      require_category(p, category);
      if (p.total == 0) {
        throw Error(ErrorCode::kEmptyProfile, "profile '" + p.corpus_id + "' is empty");
      }
      for (const auto& [id, c] : p.counts) pooled[id] += c;
    }
  }

  std::vector<std::pair<std::string, std::uint64_t>> ranked(pooled.begin(), pooled.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  if (ranked.size() > top_k) ranked.resize(top_k);

  FrequencyComparison out;
  out.category = category;
  for (const auto& p : humans) out.humans.push_back(p.corpus_id);
  for (const auto& p : llms) out.llms.push_back(p.corpus_id);
  for (const auto& [id, count] : ranked) {
    FrequencyRow row;
    row.identifier = id;
    row.pooled_count = count;
    for (const auto& p : humans) {
      row.human_rel.push_back(p.rel_freq(id));
      row.human_rate.push_back(rate(p, id));
    }
    for (const auto& p : llms) {
      row.llm_rel.push_back(p.rel_freq(id));
      row.llm_rate.push_back(rate(p, id));
    }
    row.human_mean = mean_of(row.human_rel);
    row.llm_mean = mean_of(row.llm_rel);
    const double tol = 1e-12 * std::max(row.human_mean, row.llm_mean);
    if (row.human_mean > row.llm_mean + tol) {
      row.direction = 1;
    } else if (row.llm_mean > row.human_mean + tol) {
      row.direction = -1;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// -------------------------------------------------------------- pairwise

std::string_view to_string(AllNormalization n) noexcept {
  return n == AllNormalization::kGlobal ? "global" : "block";
}

std::optional<AllNormalization> parse_all_normalization(std::string_view name) noexcept {
  if (name == "block") return AllNormalization::kBlock;
  if (name == "global") return AllNormalization::kGlobal;
  return std::nullopt;
}

const FrequencyProfile& ProfileBundle::operator[](Category c) const {
  return by_category[category_slot(c)];
}

ProfileBundle bundle_of(const ClassifiedCorpus& corpus, std::string id) {
  ProfileBundle b;
  b.id = id.empty() ? corpus.corpus_id : std::move(id);
  for (Category c : kCoreCategories) {
    auto& p = b.by_category[category_slot(c)];
    p = profile_of(corpus, c);
    p.corpus_id = b.id;
  }
  return b;
}

ProfileBundle bundle_of(const ClassifiedCorpus& corpus, std::span<const std::size_t> sentences,
                        std::string id) {
  ProfileBundle b;
  b.id = std::move(id);
  for (Category c : kCoreCategories) {
    auto& p = b.by_category[category_slot(c)];
    p = profile_of(corpus, c, sentences);
    p.corpus_id = b.id;
  }
  return b;
}

double bundle_cosine(const ProfileBundle& a, const ProfileBundle& b, Category category,
                     AllNormalization normalization) {
  if (category != Category::kAll) return cosine(a[category], b[category]);

  std::uint64_t grand_a = 0;
  std::uint64_t grand_b = 0;
  for (Category c : kCoreCategories) {
    grand_a += a[c].total;
    grand_b += b[c].total;
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (Category c : kCoreCategories) {
    const FrequencyProfile& pa = a[c];
    const FrequencyProfile& pb = b[c];
    const auto scale = [&](const FrequencyProfile& p, std::uint64_t grand) {
      if (p.total == 0) return 0.0;
      return 1.0 / static_cast<double>(normalization == AllNormalization::kBlock ? p.total : grand);
    };
    const double sa = scale(pa, grand_a);
    const double sb = scale(pb, grand_b);
    for (const auto& [id, count] : pa.counts) {
      const double x = static_cast<double>(count) * sa;
      na += x * x;
      dot += x * static_cast<double>(pb.count(id)) * sb;
    }
    for (const auto& [id, count] : pb.counts) {
      const double y = static_cast<double>(count) * sb;
      nb += y * y;
    }
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of an empty bundle");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

PairwiseVarianceReport build_pairwise_variance(std::span<const ProfileBundle> humans,
                                               std::span<const ProfileBundle> llms,
                                               Category category,
                                               AllNormalization normalization) {
  if (humans.size() < 2 || llms.size() < 2) {
    throw Error(ErrorCode::kTooFewProfiles,
                "pairwise analysis needs at least 2 human and 2 llm profiles");
  }
  if (category == Category::kUnknown) {
    throw Error(ErrorCode::kInvalidArgument, "pairwise analysis over unknown labels");
  }
  PairwiseVarianceReport r;
  r.category = category;
  r.normalization = normalization;
  for (const auto& b : humans) r.humans.push_back(b.id);
  for (const auto& b : llms) r.llms.push_back(b.id);

  const auto sim = [&](const ProfileBundle& x, const ProfileBundle& y) {
    return SimilarityPair{x.id, y.id, bundle_cosine(x, y, category, normalization)};
  };
  std::vector<SimilarityPair> hh;
  std::vector<SimilarityPair> hl;
  std::vector<SimilarityPair> ll;
  for (std::size_t i = 0; i < humans.size(); ++i) {
    for (std::size_t j = i + 1; j < humans.size(); ++j) hh.push_back(sim(humans[i], humans[j]));
    for (const auto& l : llms) hl.push_back(sim(humans[i], l));
  }
  for (std::size_t i = 0; i < llms.size(); ++i) {
    for (std::size_t j = i + 1; j < llms.size(); ++j) ll.push_back(sim(llms[i], llms[j]));
  }
  r.groups = {summarise("human-human", std::move(hh)), summarise("human-llm", std::move(hl)),
              summarise("llm-llm", std::move(ll))};
  return r;
}

// ------------------------------------------------------------- diversity

DiversityReport build_diversity_report(std::span<const FrequencyProfile> profiles,
                                       Category category) {
  DiversityReport r;
  r.category = category;
  for (const auto& p : profiles) {
    require_category(p, category);
    r.rows.push_back(DiversityRow{p.corpus_id, p.sentence_count, p.total, p.support_size(),
                                  diversity(p)});
  }
  return r;
}

// ---------------------------------------------------------- significance

std::size_t SignificanceReport::raw_significant() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [&](const SignificanceRow& x) { return x.p_value <= alpha; }));
}

std::size_t SignificanceReport::adjusted_significant() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [&](const SignificanceRow& x) { return x.p_adjusted <= alpha; }));
}

SignificanceReport build_significance(std::span<const FrequencyProfile> group_a,
                                      std::span<const FrequencyProfile> group_b,
                                      const SignificanceOptions& options) {
  if (group_a.empty() || group_b.empty()) {
    throw Error(ErrorCode::kEmptySample, "both significance groups need at least one profile");
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  const Category category = group_a.front().category;
  std::vector<std::string> ids;
  if (options.only.empty()) {
    std::map<std::string, int, std::less<>> seen;
    for (const auto* side : {&group_a, &group_b}) {
      for (const auto& p : *side) {
        for (const auto& [id, c] : p.counts) seen.emplace(id, 0);
      }
    }
    for (auto& [id, unused] : seen) ids.push_back(id);
  } else {
    ids = options.only;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  for (const auto* side : {&group_a, &group_b}) {
    for (const auto& p : *side) require_category(p, category);
  }

  SignificanceReport r;
  r.category = category;
  r.alpha = options.alpha;
  for (const auto& p : group_a) r.group_a.push_back(p.corpus_id);
  for (const auto& p : group_b) r.group_b.push_back(p.corpus_id);

  std::vector<std::pair<std::string, double>> pvalues;
  for (const auto& id : ids) {
    SignificanceRow row;
    row.identifier = id;
    for (const auto& p : group_a) row.a_values.push_back(p.rel_freq(id));
    for (const auto& p : group_b) row.b_values.push_back(p.rel_freq(id));
    MwuOptions mwu = options.mwu;
    mwu.seed = mix64(options.mwu.seed ^ fnv1a64(id));
    const StatTestResult t = mann_whitney(row.a_values, row.b_values, mwu);
    row.u = t.statistic;
    row.p_value = t.p_value;
    if (r.method.empty()) r.method = t.method;
    pvalues.emplace_back(id, t.p_value);
    r.rows.push_back(std::move(row));
  }
  const auto adjusted = bh_fdr(pvalues, options.m);
  for (std::size_t i = 0; i < r.rows.size(); ++i) r.rows[i].p_adjusted = adjusted[i].p_adjusted;
  r.m = options.m.value_or(r.rows.size());
  return r;
}

// -------------------------------------------------------------- unique

UniqueItemsReport build_unique_items(const FrequencyProfile& reference,
                                     std::span<const FrequencyProfile> others,
                                     std::uint64_t min_count, std::uint64_t max_other_count,
                                     std::size_t top_k) {
  UniqueItemsReport r;
  r.category = reference.category;
  r.min_count = min_count;
  r.max_other_count = max_other_count;
  for (const auto& other : others) {
    UniqueComparison c;
    c.reference = reference.corpus_id;
    c.other = other.corpus_id;
    c.support = not_in_only_in(reference, other);
    c.reference_only = diff_items(reference, other, min_count, max_other_count);
    c.other_only = diff_items(other, reference, min_count, max_other_count);
    if (top_k > 0) {
      if (c.reference_only.size() > top_k) c.reference_only.resize(top_k);
      if (c.other_only.size() > top_k) c.other_only.resize(top_k);
    }
    r.comparisons.push_back(std::move(c));
  }
  return r;
}

}  // namespace gramprof
