#include "gramprof/profile.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "gramprof/error.hpp"
#include "gramprof/rng.hpp"
#include "gramprof/text_format.hpp"

namespace gramprof {
namespace {

void require_same_category(const FrequencyProfile& a, const FrequencyProfile& b) {
  if (a.category != b.category) {
    throw Error(ErrorCode::kCategoryMismatch,
                "profiles '" + a.corpus_id + "' (" + std::string(to_string(a.category)) +
                    ") and '" + b.corpus_id + "' (" + std::string(to_string(b.category)) +
                    ") have different categories");
  }
}

std::string joined_id(std::string_view a, std::string_view b) {
  std::set<std::string> parts;
  for (std::string_view s : {a, b}) {
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t end = s.find('+', start);
      if (end == std::string_view::npos) end = s.size();
      if (end > start) parts.emplace(s.substr(start, end - start));
      start = end + 1;
    }
  }
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out.push_back('+');
    out += p;
  }
  return out;
}

class LabelInterner {
 public:
  explicit LabelInterner(std::vector<LabelInfo>& labels) : labels_(labels) {
    for (std::uint32_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i].label, i);
  }

  std::optional<std::uint32_t> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t add(LabelInfo info) {
    const auto id = static_cast<std::uint32_t>(labels_.size());
    index_.emplace(info.label, id);
    labels_.push_back(std::move(info));
    return id;
  }

 private:
  std::vector<LabelInfo>& labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace

// ------------------------------------------------------------ FrequencyProfile

std::uint64_t FrequencyProfile::count(std::string_view id) const noexcept {
  auto it = counts.find(id);
  return it == counts.end() ? 0 : it->second;
}

double FrequencyProfile::rel_freq(std::string_view id) const {
  if (total == 0) {
    throw Error(ErrorCode::kEmptyProfile, "profile '" + corpus_id + "' has no occurrences");
  }
  return static_cast<double>(count(id)) / static_cast<double>(total);
}

std::map<std::string, double, std::less<>> FrequencyProfile::rel_freqs() const {
  if (total == 0) {
    throw Error(ErrorCode::kEmptyProfile, "profile '" + corpus_id + "' has no occurrences");
  }
  std::map<std::string, double, std::less<>> out;
  const double t = static_cast<double>(total);
  for (const auto& [id, c] : counts) out.emplace_hint(out.end(), id, static_cast<double>(c) / t);
  return out;
}

void FrequencyProfile::add(std::string_view id, std::uint64_t n) {
  if (n == 0) return;
  auto it = counts.find(id);
  if (it == counts.end()) {
    counts.emplace(std::string(id), n);
  } else {
    it->second += n;
  }
  total += n;
}

FrequencyProfile merge_profiles(const FrequencyProfile& a, const FrequencyProfile& b) {
  require_same_category(a, b);
  FrequencyProfile out = a;
  out.corpus_id = joined_id(a.corpus_id, b.corpus_id);
  for (const auto& [id, c] : b.counts) out.add(id, c);
  out.sentence_count += b.sentence_count;
  return out;
}

void write_profile_csv(const FrequencyProfile& profile, std::ostream& out) {
  out << "identifier,count,rel_freq\n";
  for (const auto& [id, c] : profile.counts) {
    const double rel = profile.total == 0 ? 0.0
                                          : static_cast<double>(c) / static_cast<double>(profile.total);
    out << csv_field(id) << ',' << c << ',' << format_fixed(rel) << '\n';
  }
}

// ------------------------------------------------------------ ClassifiedCorpus

std::size_t ClassifiedCorpus::occurrence_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.labels.size();
  return n;
}

ClassifiedCorpus classify_corpus(std::string_view corpus_id,
                                 std::span<const SentenceRecord> records, const TypeHierarchy& h) {
  ClassifiedCorpus corpus;
  corpus.corpus_id = std::string(corpus_id);
  LabelInterner interner(corpus.labels);

  const auto intern = [&](const std::string& label) -> std::uint32_t {
    if (auto id = interner.find(label)) return *id;
    LabelInfo info;
    info.label = label;
    info.category = classify(label, h);
    std::optional<std::string> type;
    if (info.category == Category::kLexicalEntry) type = h.lexical_type_of(label);
    const std::uint32_t id = interner.add(std::move(info));
    if (type) {
      std::uint32_t type_id;
      if (auto existing = interner.find(*type)) {
        type_id = *existing;
      } else {
        LabelInfo tinfo;
        tinfo.label = *type;
        tinfo.category = classify(*type, h);
        type_id = interner.add(std::move(tinfo));
      }
      corpus.labels[id].lexical_type = type_id;
    }
    return id;
  };

  std::vector<const SentenceRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SentenceRecord* a, const SentenceRecord* b) { return record_less(*a, *b); });

  corpus.sentences.reserve(records.size());
  std::string scratch;
  for (const SentenceRecord* r : ordered) {
    ClassifiedSentence s;
    s.item_id = r->item_id;
    s.author = r->author;
    for (const Occurrence& occ : extract_occurrences(r->derivation)) {
      scratch.assign(occ.label);
      s.labels.push_back(intern(scratch));
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

std::vector<std::string_view> category_occurrences(const ClassifiedCorpus& corpus,
                                                   const ClassifiedSentence& sentence,
                                                   Category category) {
  std::vector<std::string_view> out;
  for (std::uint32_t id : sentence.labels) {
    const LabelInfo& info = corpus.labels[id];
    if (category == Category::kAll || info.category == category) {
      out.push_back(info.label);
    } else if (category == Category::kLexicalType && info.category == Category::kLexicalEntry &&
               info.lexical_type) {
      out.push_back(corpus.labels[*info.lexical_type].label);
    }
  }
  return out;
}

namespace {

template <typename IndexRange>
FrequencyProfile profile_over(const ClassifiedCorpus& corpus, Category category,
                              const IndexRange& indices, std::size_t sentence_count) {
  std::vector<std::uint64_t> per_label(corpus.labels.size(), 0);
  for (std::size_t i : indices) {
    for (std::uint32_t id : corpus.sentences[i].labels) {
      const LabelInfo& info = corpus.labels[id];
      if (category == Category::kAll || info.category == category) {
        ++per_label[id];
      } else if (category == Category::kLexicalType &&
                 info.category == Category::kLexicalEntry && info.lexical_type) {
        ++per_label[*info.lexical_type];
      }
    }
  }
  FrequencyProfile p;
  p.corpus_id = corpus.corpus_id;
  p.category = category;
  p.sentence_count = sentence_count;
  for (std::size_t id = 0; id < per_label.size(); ++id) {
    if (per_label[id] != 0) p.add(corpus.labels[id].label, per_label[id]);
  }
  return p;
}

struct IotaRange {
  std::size_t n;
  struct It {
    std::size_t v;
    std::size_t operator*() const { return v; }
    It& operator++() {
      ++v;
      return *this;
    }
    bool operator!=(const It& o) const { return v != o.v; }
  };
  It begin() const { return {0}; }
  It end() const { return {n}; }
};

}  // namespace

FrequencyProfile profile_of(const ClassifiedCorpus& corpus, Category category) {
  return profile_over(corpus, category, IotaRange{corpus.sentences.size()},
                      corpus.sentences.size());
}

FrequencyProfile profile_of(const ClassifiedCorpus& corpus, Category category,
                            std::span<const std::size_t> sentence_indices) {
  for (std::size_t i : sentence_indices) {
    if (i >= corpus.sentences.size()) {
      throw Error(ErrorCode::kInvalidArgument, "sentence index out of range");
    }
  }
  return profile_over(corpus, category, sentence_indices, sentence_indices.size());
}

FrequencyProfile build_profile(std::span<const SentenceRecord> records, const TypeHierarchy& h,
                               Category category) {
  if (records.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences to profile");
  std::string id = records.front().corpus_id;
  for (const auto& r : records) {
    if (r.corpus_id != id) id = joined_id(id, r.corpus_id);
  }
  return profile_of(classify_corpus(id, records, h), category);
}

// ---------------------------------------------------------------- sampling

std::vector<std::size_t> sample_indices(std::size_t population, const SamplePlan& plan) {
  if (plan.sample_size < 1) {
    throw Error(ErrorCode::kInvalidSamplePlan, "sample size must be at least 1");
  }
  if (population == 0) throw Error(ErrorCode::kEmptyCorpus, "cannot sample an empty corpus");
  SplitMix64 rng(plan.seed);
  std::vector<std::size_t> out;
  out.reserve(plan.sample_size);
  if (plan.replacement) {
    for (std::size_t i = 0; i < plan.sample_size; ++i) {
      out.push_back(static_cast<std::size_t>(rng.below(population)));
    }
  } else {
    if (plan.sample_size > population) {
      throw Error(ErrorCode::kSampleTooLarge,
                  "sample of " + std::to_string(plan.sample_size) + " from " +
                      std::to_string(population) + " items without replacement");
    }
    std::vector<std::size_t> slots(population);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t i = 0; i < plan.sample_size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
      std::swap(slots[i], slots[j]);
    }
    out.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(plan.sample_size));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SentenceRecord> sample_corpus(std::span<const SentenceRecord> records,
                                          const SamplePlan& plan) {
  std::vector<const SentenceRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SentenceRecord* a, const SentenceRecord* b) { return record_less(*a, *b); });
  std::vector<SentenceRecord> out;
  for (std::size_t i : sample_indices(ordered.size(), plan)) out.push_back(*ordered[i]);
  return out;
}

ClassifiedCorpus sample_sentences(const ClassifiedCorpus& corpus, const SamplePlan& plan) {
  ClassifiedCorpus out;
  out.corpus_id = corpus.corpus_id;
  out.labels = corpus.labels;
  for (std::size_t i : sample_indices(corpus.sentences.size(), plan)) {
    out.sentences.push_back(corpus.sentences[i]);
  }
  return out;
}

ClassifiedCorpus pool_corpora(std::string_view corpus_id,
                              std::span<const ClassifiedCorpus* const> corpora) {
  std::vector<const ClassifiedCorpus*> ordered(corpora.begin(), corpora.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ClassifiedCorpus* a, const ClassifiedCorpus* b) {
                     return a->corpus_id < b->corpus_id;
                   });
  ClassifiedCorpus out;
  out.corpus_id = std::string(corpus_id);
  LabelInterner interner(out.labels);

  for (const ClassifiedCorpus* c : ordered) {
    std::vector<std::uint32_t> remap(c->labels.size());
    for (std::uint32_t i = 0; i < c->labels.size(); ++i) {
      const LabelInfo& info = c->labels[i];
      if (auto id = interner.find(info.label)) {
        remap[i] = *id;
      } else {
        LabelInfo copy = info;
        copy.lexical_type.reset();
        remap[i] = interner.add(std::move(copy));
      }
    }
    for (std::uint32_t i = 0; i < c->labels.size(); ++i) {
      if (c->labels[i].lexical_type && !out.labels[remap[i]].lexical_type) {
        out.labels[remap[i]].lexical_type = remap[*c->labels[i].lexical_type];
      }
    }
    for (const auto& s : c->sentences) {
      ClassifiedSentence copy;
      copy.item_id = c->corpus_id + "/" + s.item_id;
      copy.author = s.author;
      copy.labels.reserve(s.labels.size());
      for (std::uint32_t id : s.labels) copy.labels.push_back(remap[id]);
      out.sentences.push_back(std::move(copy));
    }
  }
  return out;
}

// ----------------------------------------------------------------- authors

std::map<std::string, std::vector<SentenceRecord>> group_by_author(
    std::span<const SentenceRecord> records, std::size_t min_sentences) {
  std::map<std::string, std::vector<SentenceRecord>> groups;
  for (const auto& r : records) {
    if (r.author) groups[*r.author].push_back(r);
  }
  std::erase_if(groups, [&](const auto& kv) { return kv.second.size() < min_sentences; });
  if (groups.empty()) {
    throw Error(ErrorCode::kNoAuthorsFound,
                "no author has at least " + std::to_string(min_sentences) + " sentences");
  }
  for (auto& [author, recs] : groups) std::stable_sort(recs.begin(), recs.end(), record_less);
  return groups;
}

std::map<std::string, std::vector<std::size_t>> author_groups(const ClassifiedCorpus& corpus,
                                                              std::size_t min_sentences) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    if (corpus.sentences[i].author) groups[*corpus.sentences[i].author].push_back(i);
  }
  std::erase_if(groups, [&](const auto& kv) { return kv.second.size() < min_sentences; });
  if (groups.empty()) {
    throw Error(ErrorCode::kNoAuthorsFound,
                "no author in '" + corpus.corpus_id + "' has at least " +
                    std::to_string(min_sentences) + " sentences");
  }
  return groups;
}

// ----------------------------------------------------- support comparisons

std::vector<RankedItem> diff_items(const FrequencyProfile& a, const FrequencyProfile& b,
                                   std::uint64_t min_count_a, std::uint64_t max_count_b) {
  require_same_category(a, b);
  std::vector<RankedItem> out;
  for (const auto& [id, ca] : a.counts) {
    const std::uint64_t cb = b.count(id);
    if (ca >= min_count_a && cb <= max_count_b) out.push_back({id, ca, cb});
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedItem& x, const RankedItem& y) {
    if (x.count_a != y.count_a) return x.count_a > y.count_a;
    return x.identifier < y.identifier;
  });
  return out;
}

SupportComparison not_in_only_in(const FrequencyProfile& reference, const FrequencyProfile& other) {
  require_same_category(reference, other);
  SupportComparison out;
  for (const auto& [id, c] : reference.counts) {
    if (other.counts.contains(id)) {
      ++out.shared;
    } else {
      ++out.not_in;
    }
  }
  for (const auto& [id, c] : other.counts) {
    if (!reference.counts.contains(id)) ++out.only_in;
  }
  return out;
}

}  // namespace gramprof
