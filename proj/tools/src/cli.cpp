#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gramprof/cache.hpp"
#include "gramprof/error.hpp"
#include "gramprof/hierarchy.hpp"
#include "gramprof/profile.hpp"
#include "gramprof/report.hpp"
#include "gramprof/rng.hpp"
#include "gramprof/stats.hpp"
#include "gramprof/text_format.hpp"

namespace gramprof::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kManifestVersion = 1;
constexpr std::string_view kPooledLlm = "llm-pooled";
constexpr std::string_view kPooledHuman = "human-pooled";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------- options

struct CorpusSpec {
  std::string id;
  CorpusRole role = CorpusRole::kHuman;
  CorpusFormat format = CorpusFormat::kUdfLines;
  std::string path;
};

struct Common {
  std::string out = "out";
  std::uint64_t seed = 1;
  std::vector<std::string> corpora;  // analysis selection; empty = every ingested corpus
  std::vector<std::string> grammar;  // optional staleness check
  std::vector<std::string> lexicon;
};

struct IngestOptions {
  std::vector<std::string> corpus_specs;
  bool lenient = false;
};

struct CompareOptions {
  std::string category = "construction";
  std::size_t sample = 0;
  bool replacement = false;
};

struct FreqOptions {
  std::string category = "construction";
  std::size_t top_k = 20;
  std::size_t sample = 0;
  bool replacement = false;
};

struct DiversityOptions {
  std::string category = "construction";
  std::size_t resamples = 10000;
  std::vector<std::string> pairs;
  bool no_tests = false;
  std::size_t sample = 0;
  bool replacement = false;
};

struct SignifOptions {
  std::string category = "construction";
  std::vector<std::string> group_a;
  std::vector<std::string> group_b;
  std::string mwu_mode = "auto";
  std::size_t mc_reps = 10000;
  std::size_t fdr_m = 0;
  double alpha = 0.05;
  std::vector<std::string> only;
};

struct UniqueOptions {
  std::string category = "lexentry";
  std::vector<std::string> reference;
  std::size_t sample = 25000;
  bool replacement = false;
  std::uint64_t min_count = 1;
  std::uint64_t max_other_count = 0;
  std::size_t top_k = 15;
};

struct PairwiseOptions {
  std::string category = "all";
  std::string normalization = "block";
  std::size_t min_sentences = 101;
  std::size_t llm_sample = 0;
};

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }) && id != "." && id != "..";
}

CorpusSpec parse_corpus_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) break;
    parts.push_back(text.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.size() != 3 || start >= text.size()) {
    throw UsageError("--corpus expects ID:ROLE:FORMAT:PATH, got '" + text + "'");
  }
  CorpusSpec spec;
  spec.id = parts[0];
  spec.path = text.substr(start);
  if (!valid_id(spec.id)) {
    throw UsageError("corpus id '" + spec.id + "' may only use letters, digits, '_', '-', '.'");
  }
  const auto role = parse_corpus_role(parts[1]);
  if (!role) throw UsageError("corpus role must be human or llm, got '" + parts[1] + "'");
  spec.role = *role;
  const auto format = parse_corpus_format(parts[2]);
  if (!format) throw UsageError("corpus format must be udf-lines or jsonl, got '" + parts[2] + "'");
  spec.format = *format;
  return spec;
}

Category parse_category_flag(const std::string& name, bool allow_all) {
  const auto c = parse_category(name);
  if (!c || *c == Category::kUnknown || (!allow_all && *c == Category::kAll)) {
    throw UsageError("unsupported category '" + name + "'");
  }
  return *c;
}

std::uint64_t seed_for(std::uint64_t seed, std::string_view id) {
  return mix64(seed ^ fnv1a64(id));
}

// ---------------------------------------------------------------- files

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) {
    SourceLocation where;
    where.file = path.string();
    throw Error(ErrorCode::kIo, "cannot write output file", where);
  }
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream text;
  fn(text);
  write_text(path, text.str());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    SourceLocation where;
    where.file = path.string();
    throw Error(ErrorCode::kIo, "cannot read file", where);
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path cache_dir(const Common& c) { return fs::path(c.out) / "cache"; }
fs::path manifest_path(const Common& c) { return cache_dir(c) / "manifest.json"; }

TypeHierarchy load_grammar(const Common& c, std::ostream& err) {
  std::vector<fs::path> paths(c.grammar.begin(), c.grammar.end());
  const auto sources = discover_tdl_sources(paths, c.lexicon);
  if (sources.empty()) throw Error(ErrorCode::kIo, "no .tdl files found under --grammar");
  TypeHierarchy h = parse_tdl(sources);
  if (!h.warnings().empty()) {
    err << "note: " << h.warnings().size()
        << " supertype(s) referenced but never defined; added as roots\n";
  }
  return h;
}

// ------------------------------------------------------------ workspace

struct LoadedCorpus {
  std::string id;
  CorpusRole role = CorpusRole::kHuman;
  ClassifiedCorpus corpus;
};

struct Workspace {
  std::vector<LoadedCorpus> corpora;

  std::vector<const LoadedCorpus*> with_role(CorpusRole role) const {
    std::vector<const LoadedCorpus*> out;
    for (const auto& c : corpora) {
      if (c.role == role) out.push_back(&c);
    }
    return out;
  }
  const LoadedCorpus& find(const std::string& id) const {
    for (const auto& c : corpora) {
      if (c.id == id) return c;
    }
    throw UsageError("corpus '" + id + "' is not part of this analysis");
  }
};

Workspace load_workspace(const Common& c, std::ostream& err) {
  const fs::path manifest_file = manifest_path(c);
  if (!fs::exists(manifest_file)) {
    SourceLocation where;
    where.file = manifest_file.string();
    throw Error(ErrorCode::kMissingCache, "no profile cache; run 'ingest' first", where);
  }
  Json manifest;
  try {
    manifest = Json::parse(read_text(manifest_file));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("bad cache manifest: ") + e.what());
  }
  if (manifest.value("schema_version", 0) != kManifestVersion) {
    throw Error(ErrorCode::kStaleCache, "cache manifest version differs; run 'ingest' again");
  }
  const auto grammar_checksum = manifest.at("grammar_checksum").get<std::uint64_t>();
  if (!c.grammar.empty()) {
    const TypeHierarchy h = load_grammar(c, err);
    if (h.checksum() != grammar_checksum) {
      throw Error(ErrorCode::kStaleCache,
                  "grammar files changed since ingest; run 'ingest' again");
    }
  }

  std::set<std::string> wanted(c.corpora.begin(), c.corpora.end());
  std::set<std::string> known;
  Workspace ws;
  for (const auto& entry : manifest.at("corpora")) {
    const auto id = entry.at("id").get<std::string>();
    known.insert(id);
    if (!wanted.empty() && wanted.count(id) == 0) continue;
    CorpusCache cache = read_cache(cache_dir(c) / (id + ".gpc"));
    if (cache.grammar_checksum != grammar_checksum) {
      throw Error(ErrorCode::kStaleCache, "cache for '" + id + "' was built with another grammar");
    }
    const fs::path source = cache.source_path;
    if (fs::exists(source) && file_checksum(source) != cache.source_checksum) {
      throw Error(ErrorCode::kStaleCache,
                  "corpus file for '" + id + "' changed since ingest; run 'ingest' again");
    }
    ws.corpora.push_back(LoadedCorpus{id, cache.role, std::move(cache.corpus)});
  }
  for (const auto& id : wanted) {
    if (known.count(id) == 0) throw UsageError("corpus '" + id + "' was never ingested");
  }
  if (ws.corpora.empty()) throw UsageError("no corpora selected");
  return ws;
}

ClassifiedCorpus sampled(const ClassifiedCorpus& corpus, std::size_t sample, bool replacement,
                         std::uint64_t seed, std::ostream& err) {
  if (sample == 0) return corpus;
  std::size_t size = sample;
  if (!replacement && size > corpus.sentences.size()) {
    err << "note: '" << corpus.corpus_id << "' has " << corpus.sentences.size()
        << " sentences; sample of " << sample << " reduced to the full corpus\n";
    size = corpus.sentences.size();
  }
  return sample_sentences(corpus, SamplePlan{size, seed_for(seed, corpus.corpus_id), replacement});
}

ClassifiedCorpus pooled(std::string_view id, const std::vector<const LoadedCorpus*>& parts) {
  std::vector<const ClassifiedCorpus*> ptrs;
  for (const auto* p : parts) ptrs.push_back(&p->corpus);
  return pool_corpora(id, ptrs);
}

FrequencyProfile profile_named(const ClassifiedCorpus& corpus, Category category,
                               std::string id) {
  FrequencyProfile p = profile_of(corpus, category);
  p.corpus_id = std::move(id);
  return p;
}

// --------------------------------------------------------------- ingest

int cmd_ingest(const Common& c, const IngestOptions& o, std::ostream& out, std::ostream& err) {
  if (o.corpus_specs.empty()) throw UsageError("ingest needs at least one --corpus");
  if (c.grammar.empty()) throw UsageError("ingest needs --grammar");
  std::vector<CorpusSpec> specs;
  std::set<std::string> ids;
  for (const auto& text : o.corpus_specs) {
    specs.push_back(parse_corpus_spec(text));
    if (!ids.insert(specs.back().id).second) {
      throw UsageError("corpus id '" + specs.back().id + "' given twice");
    }
  }

  const TypeHierarchy h = load_grammar(c, err);
  out << "grammar: " << h.size() << " identifiers, checksum " << std::hex << h.checksum()
      << std::dec << '\n';

  Json manifest;
  manifest["schema_version"] = kManifestVersion;
  manifest["grammar_checksum"] = h.checksum();
  manifest["corpora"] = Json::array();

  std::ostringstream summary;
  summary << "corpus,role,format,sentences,skipped,occurrences,unknown_occurrences,"
             "construction,lexrule,lextype,lexentry\n";
  std::map<std::string, Category, std::less<>> observed;
  std::set<std::string, std::less<>> observed_types;

  for (const auto& spec : specs) {
    ReadOptions ro;
    ro.format = spec.format;
    ro.corpus_id = spec.id;
    ro.lenient = o.lenient;
    CorpusReadResult read = read_corpus(spec.path, ro);
    for (const auto& s : read.skipped) {
      err << "warning: " << spec.path << ":" << s.line << ": " << s.message << '\n';
    }
    if (read.records.empty()) {
      SourceLocation where;
      where.file = spec.path;
      throw Error(ErrorCode::kEmptyCorpus, "corpus '" + spec.id + "' has no sentences", where);
    }

    CorpusCache cache;
    cache.grammar_checksum = h.checksum();
    cache.source_checksum = file_checksum(spec.path);
    cache.role = spec.role;
    cache.format = std::string(to_string(spec.format));
    cache.source_path = spec.path;
    cache.skipped_lines = read.skipped.size();
    cache.corpus = classify_corpus(spec.id, read.records, h);
    write_cache(cache, cache_dir(c) / (spec.id + ".gpc"));

    std::size_t unknown = 0;
    for (const auto& s : cache.corpus.sentences) {
      for (auto id : s.labels) {
        if (cache.corpus.labels[id].category == Category::kUnknown) ++unknown;
      }
    }
    for (const auto& l : cache.corpus.labels) {
      observed.emplace(l.label, l.category);
      if (l.category == Category::kLexicalType) observed_types.insert(l.label);
      if (l.lexical_type) observed_types.insert(cache.corpus.labels[*l.lexical_type].label);
    }

    std::array<std::size_t, 4> distinct{};
    for (Category cat : kCoreCategories) {
      const FrequencyProfile p = profile_of(cache.corpus, cat);
      distinct[static_cast<std::size_t>(cat)] = p.support_size();
      write_with(fs::path(c.out) / "profiles" /
                     (spec.id + "." + std::string(to_string(cat)) + ".csv"),
                 [&](std::ostream& os) { write_profile_csv(p, os); });
    }

    summary << csv_field(spec.id) << ',' << to_string(spec.role) << ','
            << to_string(spec.format) << ',' << cache.corpus.sentences.size() << ','
            << read.skipped.size() << ',' << cache.corpus.occurrence_count() << ',' << unknown;
    for (auto d : distinct) summary << ',' << d;
    summary << '\n';

    out << spec.id << ": " << cache.corpus.sentences.size() << " sentences read, "
        << read.skipped.size() << " skipped, " << unknown << " unknown-label occurrences\n";

    Json entry;
    entry["id"] = spec.id;
    entry["role"] = to_string(spec.role);
    entry["format"] = to_string(spec.format);
    entry["path"] = spec.path;
    entry["sentences"] = cache.corpus.sentences.size();
    entry["skipped"] = read.skipped.size();
    manifest["corpora"].push_back(std::move(entry));
  }

  std::set<std::string, std::less<>> grammar_ids;
  for (auto& id : h.identifiers()) grammar_ids.insert(std::move(id));
  const CategoryTally in_grammar = tally_categories(grammar_ids, h);
  std::ostringstream coverage;
  coverage << "category,grammar,data,data_in_grammar\n";
  for (Category cat : kCoreCategories) {
    std::size_t data = 0;
    std::size_t known = 0;
    if (cat == Category::kLexicalType) {
      data = observed_types.size();
      for (const auto& t : observed_types) known += h.contains(t) ? 1 : 0;
    } else {
      for (const auto& [label, lc] : observed) {
        if (lc != cat) continue;
        ++data;
        known += h.contains(label) ? 1 : 0;
      }
    }
    coverage << to_string(cat) << ',' << in_grammar[cat] << ',' << data << ',' << known << '\n';
  }

  write_text(fs::path(c.out) / "ingest.csv", summary.str());
  write_text(fs::path(c.out) / "coverage.csv", coverage.str());
  write_text(manifest_path(c), manifest.dump(2) + "\n");
  return kExitOk;
}

// -------------------------------------------------------------- compare

int cmd_compare(const Common& c, const CompareOptions& o, std::ostream& out, std::ostream& err) {
  const Category category = parse_category_flag(o.category, true);
  const Workspace ws = load_workspace(c, err);
  std::vector<FrequencyProfile> profiles;
  for (const auto& lc : ws.corpora) {
    const ClassifiedCorpus s = sampled(lc.corpus, o.sample, o.replacement, c.seed, err);
    profiles.push_back(profile_named(s, category, lc.id));
  }
  const ComparisonReport r = build_comparison(profiles, category);
  const fs::path dir = fs::path(c.out) / "compare";
  const std::string stem = std::string(to_string(category));
  emit_file(r, ReportFormat::kCsv, dir / (stem + ".pairs.csv"));
  write_with(dir / (stem + ".matrix.csv"), [&](std::ostream& os) { emit_matrix_csv(r, os); });
  emit_file(r, ReportFormat::kJson, dir / (stem + ".json"));
  if (r.pca) emit_file(r, ReportFormat::kSvgScatter, dir / (stem + ".svg"));
  if (!r.pairs.empty()) {
    out << "most similar: " << r.pairs.front().a << " / " << r.pairs.front().b << " "
        << format_fixed(r.pairs.front().cosine) << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- freq

int cmd_freq(const Common& c, const FreqOptions& o, std::ostream& out, std::ostream& err) {
  const Category category = parse_category_flag(o.category, false);
  const Workspace ws = load_workspace(c, err);
  std::vector<FrequencyProfile> humans;
  std::vector<FrequencyProfile> llms;
  for (const auto& lc : ws.corpora) {
    const ClassifiedCorpus s = sampled(lc.corpus, o.sample, o.replacement, c.seed, err);
    (lc.role == CorpusRole::kHuman ? humans : llms).push_back(profile_named(s, category, lc.id));
  }
  const FrequencyComparison r = build_frequency_comparison(humans, llms, o.top_k);
  const fs::path dir = fs::path(c.out) / "freq";
  const std::string stem = std::string(to_string(category));
  emit_file(r, ReportFormat::kCsv, dir / (stem + ".csv"));
  emit_file(r, ReportFormat::kJson, dir / (stem + ".json"));
  out << r.rows.size() << " identifiers written\n";
  return kExitOk;
}

// ------------------------------------------------------------ diversity

int cmd_diversity(const Common& c, const DiversityOptions& o, std::ostream& out,
                  std::ostream& err) {
  const Category category = parse_category_flag(o.category, true);
  const Workspace ws = load_workspace(c, err);

  std::vector<ClassifiedCorpus> corpora;
  for (const auto& lc : ws.corpora) {
    corpora.push_back(sampled(lc.corpus, o.sample, o.replacement, c.seed, err));
    corpora.back().corpus_id = lc.id;
  }
  const auto llms = ws.with_role(CorpusRole::kLlm);
  if (llms.size() > 1) {
    corpora.push_back(sampled(pooled(kPooledLlm, llms), o.sample, o.replacement, c.seed, err));
  }

  std::vector<FrequencyProfile> profiles;
  for (const auto& corpus : corpora) {
    profiles.push_back(profile_named(corpus, category, corpus.corpus_id));
  }
  DiversityReport r = build_diversity_report(profiles, category);

  const auto find = [&](const std::string& id) -> const ClassifiedCorpus& {
    for (const auto& corpus : corpora) {
      if (corpus.corpus_id == id) return corpus;
    }
    throw UsageError("--pair refers to unknown corpus '" + id + "'");
  };
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& p : o.pairs) {
    const auto colon = p.find(':');
    if (colon == std::string::npos) throw UsageError("--pair expects A:B, got '" + p + "'");
    pairs.emplace_back(p.substr(0, colon), p.substr(colon + 1));
  }
  if (pairs.empty() && !llms.empty()) {
    const std::string against =
        llms.size() > 1 ? std::string(kPooledLlm) : llms.front()->id;
    for (const auto* h : ws.with_role(CorpusRole::kHuman)) pairs.emplace_back(h->id, against);
  }
  if (!o.no_tests) {
    for (const auto& [a, b] : pairs) {
      for (auto stat : {DiversityStatistic::kShannonDiff, DiversityStatistic::kGiniDiff}) {
        PermutationOptions po;
        po.statistic = stat;
        po.resamples = o.resamples;
        po.seed = seed_for(c.seed, a + "\n" + b);
        r.tests.push_back(permutation_test(find(a), find(b), category, po));
      }
    }
  }

  const fs::path dir = fs::path(c.out) / "diversity";
  const std::string stem = std::string(to_string(category));
  emit_file(r, ReportFormat::kCsv, dir / (stem + ".csv"));
  emit_file(r, ReportFormat::kJson, dir / (stem + ".json"));
  write_with(dir / (stem + ".tests.csv"), [&](std::ostream& os) { emit_tests_csv(r.tests, os); });
  for (const auto& row : r.rows) {
    out << row.corpus_id << ": H = " << format_fixed(row.score.shannon_h)
        << ", 1 - lambda = " << format_fixed(row.score.gini_simpson) << '\n';
  }
  return kExitOk;
}

// -------------------------------------------------------------- signif

int cmd_signif(const Common& c, const SignifOptions& o, std::ostream& out, std::ostream& err) {
  const Category category = parse_category_flag(o.category, false);
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  const Workspace ws = load_workspace(c, err);

  const auto group = [&](const std::vector<std::string>& ids, CorpusRole fallback) {
    std::vector<FrequencyProfile> profiles;
    if (ids.empty()) {
      for (const auto* lc : ws.with_role(fallback)) {
        profiles.push_back(profile_named(lc->corpus, category, lc->id));
      }
    } else {
      for (const auto& id : ids) {
        profiles.push_back(profile_named(ws.find(id).corpus, category, id));
      }
    }
    return profiles;
  };
  const auto a = group(o.group_a, CorpusRole::kHuman);
  const auto b = group(o.group_b, CorpusRole::kLlm);
  if (a.empty() || b.empty()) throw UsageError("signif needs two non-empty groups");

  SignificanceOptions so;
  if (o.mwu_mode == "auto") {
    so.mwu.mode = MwuMode::kAuto;
  } else if (o.mwu_mode == "exact") {
    so.mwu.mode = MwuMode::kExact;
  } else if (o.mwu_mode == "mc" || o.mwu_mode == "monte-carlo") {
    so.mwu.mode = MwuMode::kMonteCarlo;
  } else {
    throw UsageError("--mwu-mode must be auto, exact or mc");
  }
  so.mwu.seed = c.seed;
  so.mwu.reps = o.mc_reps;
  if (o.fdr_m > 0) so.m = o.fdr_m;
  so.alpha = o.alpha;
  so.only = o.only;
  const SignificanceReport r = build_significance(a, b, so);

  const fs::path dir = fs::path(c.out) / "signif";
  const std::string stem = std::string(to_string(category));
  emit_file(r, ReportFormat::kCsv, dir / (stem + ".csv"));
  emit_file(r, ReportFormat::kJson, dir / (stem + ".json"));
  out << r.rows.size() << " identifiers tested (" << r.method << "); " << r.raw_significant()
      << " with p <= " << format_fixed(r.alpha, 3) << ", " << r.adjusted_significant()
      << " after BH with m = " << r.m << '\n';
  return kExitOk;
}

// -------------------------------------------------------------- unique

int cmd_unique(const Common& c, const UniqueOptions& o, std::ostream& out, std::ostream& err) {
  const Category category = parse_category_flag(o.category, false);
  const Workspace ws = load_workspace(c, err);

  std::vector<const LoadedCorpus*> refs;
  if (o.reference.empty()) {
    refs = ws.with_role(CorpusRole::kHuman);
  } else {
    for (const auto& id : o.reference) refs.push_back(&ws.find(id));
  }
  if (refs.empty()) throw UsageError("unique needs a reference corpus");
  const std::string ref_id = refs.size() == 1 ? refs.front()->id : std::string(kPooledHuman);
  const ClassifiedCorpus ref_corpus =
      refs.size() == 1 ? refs.front()->corpus : pooled(kPooledHuman, refs);
  const FrequencyProfile reference = profile_named(
      sampled(ref_corpus, o.sample, o.replacement, c.seed, err), category, ref_id);

  std::set<std::string> ref_ids;
  for (const auto* r : refs) ref_ids.insert(r->id);
  std::vector<const LoadedCorpus*> others;
  for (const auto& lc : ws.corpora) {
    if (ref_ids.count(lc.id) == 0 && (o.reference.empty() ? lc.role == CorpusRole::kLlm : true)) {
      others.push_back(&lc);
    }
  }
  if (others.empty()) throw UsageError("unique needs at least one corpus to compare against");

  std::vector<FrequencyProfile> profiles;
  for (const auto* lc : others) {
    profiles.push_back(profile_named(sampled(lc->corpus, o.sample, o.replacement, c.seed, err),
                                     category, lc->id));
  }
  if (others.size() > 1) {
    const std::string id(o.reference.empty() ? kPooledLlm : std::string_view("others-pooled"));
    profiles.push_back(profile_named(
        sampled(pooled(id, others), o.sample, o.replacement, c.seed, err), category, id));
  }

  const UniqueItemsReport r =
      build_unique_items(reference, profiles, o.min_count, o.max_other_count, o.top_k);
  const fs::path dir = fs::path(c.out) / "unique";
  const std::string stem = std::string(to_string(category));
  emit_file(r, ReportFormat::kCsv, dir / (stem + ".items.csv"));
  emit_file(r, ReportFormat::kJson, dir / (stem + ".json"));
  write_with(dir / (stem + ".support.csv"), [&](std::ostream& os) { emit_support_csv(r, os); });
  for (const auto& cmp : r.comparisons) {
    out << cmp.reference << " vs " << cmp.other << ": not in " << cmp.support.not_in
        << ", only in " << cmp.support.only_in << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------ pairwise

int cmd_pairwise(const Common& c, const PairwiseOptions& o, std::ostream& out,
                 std::ostream& err) {
  const Category category = parse_category_flag(o.category, true);
  const auto normalization = parse_all_normalization(o.normalization);
  if (!normalization) throw UsageError("--normalization must be block or global");
  const Workspace ws = load_workspace(c, err);

  const auto humans = ws.with_role(CorpusRole::kHuman);
  std::vector<ProfileBundle> authors;
  for (const auto* lc : humans) {
    for (const auto& [author, indices] : author_groups(lc->corpus, o.min_sentences)) {
      const std::string id = humans.size() == 1 ? author : lc->id + "/" + author;
      authors.push_back(bundle_of(lc->corpus, indices, id));
    }
  }
  std::vector<ProfileBundle> llms;
  for (const auto* lc : ws.with_role(CorpusRole::kLlm)) {
    llms.push_back(bundle_of(sampled(lc->corpus, o.llm_sample, false, c.seed, err), lc->id));
  }

  const PairwiseVarianceReport r = build_pairwise_variance(authors, llms, category, *normalization);
  const fs::path dir = fs::path(c.out) / "pairwise";
  const std::string stem = std::string(to_string(category));
  emit_file(r, ReportFormat::kCsv, dir / (stem + ".csv"));
  emit_file(r, ReportFormat::kJson, dir / (stem + ".json"));
  out << authors.size() << " authors, " << llms.size() << " models\n";
  for (const auto& g : r.groups) {
    out << g.name << ": " << g.pairs.size() << " pairs, mean " << format_fixed(g.mean)
        << ", variance " << format_fixed(g.variance) << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- app

void add_common(CLI::App& sub, Common& c, bool analysis) {
  sub.add_option("-o,--out", c.out, "Output directory")->capture_default_str();
  sub.add_option("--seed", c.seed, "Seed for every stochastic step")->capture_default_str();
  sub.add_option("--grammar", c.grammar,
                 analysis ? "Grammar .tdl files or directories; when given, checked against "
                            "the cache"
                          : "Grammar .tdl files or directories");
  sub.add_option("--lexicon", c.lexicon, "File names or stems holding lexical entries");
  if (analysis) {
    sub.add_option("--corpora", c.corpora, "Restrict the analysis to these corpus ids")
        ->delimiter(',');
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grammar-type frequency profiles over HPSG derivations", "grammar-profile"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  Common common;
  IngestOptions ingest;
  CompareOptions compare;
  FreqOptions freq;
  DiversityOptions diversity;
  SignifOptions signif;
  UniqueOptions unique;
  PairwiseOptions pairwise;

  auto* s_ingest = app.add_subcommand("ingest", "Parse corpora and cache classified profiles");
  add_common(*s_ingest, common, false);
  s_ingest->add_option("--corpus", ingest.corpus_specs, "ID:ROLE:FORMAT:PATH (repeatable)");
  s_ingest->add_flag("--lenient", ingest.lenient, "Skip unparseable lines instead of failing");

  auto* s_compare = app.add_subcommand("compare", "Cosine matrix and PCA over corpora");
  add_common(*s_compare, common, true);
  s_compare->add_option("--category", compare.category)->capture_default_str();
  s_compare->add_option("--sample", compare.sample, "Sentences per corpus (0 = all)");
  s_compare->add_flag("--replacement", compare.replacement, "Sample with replacement");

  auto* s_freq = app.add_subcommand("freq", "Human vs model relative frequencies");
  add_common(*s_freq, common, true);
  s_freq->add_option("--category", freq.category)->capture_default_str();
  s_freq->add_option("--top-k", freq.top_k)->capture_default_str();
  s_freq->add_option("--sample", freq.sample, "Sentences per corpus (0 = all)");
  s_freq->add_flag("--replacement", freq.replacement, "Sample with replacement");

  auto* s_div = app.add_subcommand("diversity", "Shannon entropy, Gini-Simpson, permutation tests");
  add_common(*s_div, common, true);
  s_div->add_option("--category", diversity.category)->capture_default_str();
  s_div->add_option("--resamples", diversity.resamples)->capture_default_str();
  s_div->add_option("--pair", diversity.pairs, "A:B corpus pair to test (repeatable)");
  s_div->add_flag("--no-tests", diversity.no_tests, "Skip permutation tests");
  s_div->add_option("--sample", diversity.sample, "Sentences per corpus (0 = all)");
  s_div->add_flag("--replacement", diversity.replacement, "Sample with replacement");

  auto* s_sig = app.add_subcommand("signif", "Per-identifier Mann-Whitney U with BH correction");
  add_common(*s_sig, common, true);
  s_sig->add_option("--category", signif.category)->capture_default_str();
  s_sig->add_option("--group-a", signif.group_a, "Corpus ids (default: human corpora)")
      ->delimiter(',');
  s_sig->add_option("--group-b", signif.group_b, "Corpus ids (default: llm corpora)")
      ->delimiter(',');
  s_sig->add_option("--mwu-mode", signif.mwu_mode, "auto, exact or mc")->capture_default_str();
  s_sig->add_option("--mc-reps", signif.mc_reps)->capture_default_str();
  s_sig->add_option("--fdr-m", signif.fdr_m, "BH family size (0 = identifiers tested)")
      ->capture_default_str();
  s_sig->add_option("--alpha", signif.alpha)->capture_default_str();
  s_sig->add_option("--only", signif.only, "Test only these identifiers")->delimiter(',');

  auto* s_uni = app.add_subcommand("unique", "Items found in only one of two samples");
  add_common(*s_uni, common, true);
  s_uni->add_option("--category", unique.category)->capture_default_str();
  s_uni->add_option("--reference", unique.reference, "Reference corpus ids (default: human)")
      ->delimiter(',');
  s_uni->add_option("--sample", unique.sample, "Sentences per side (0 = all)")
      ->capture_default_str();
  s_uni->add_flag("--replacement", unique.replacement, "Sample with replacement");
  s_uni->add_option("--min-count", unique.min_count)->capture_default_str();
  s_uni->add_option("--max-other-count", unique.max_other_count)->capture_default_str();
  s_uni->add_option("--top-k", unique.top_k, "Rows per list (0 = all)")->capture_default_str();

  auto* s_pair = app.add_subcommand("pairwise", "Author vs author vs model cosine distributions");
  add_common(*s_pair, common, true);
  s_pair->add_option("--category", pairwise.category)->capture_default_str();
  s_pair->add_option("--normalization", pairwise.normalization, "block or global")
      ->capture_default_str();
  s_pair->add_option("--min-sentences", pairwise.min_sentences)->capture_default_str();
  s_pair->add_option("--llm-sample", pairwise.llm_sample, "Sentences per model (0 = all)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (s_ingest->parsed()) return cmd_ingest(common, ingest, out, err);
  if (s_compare->parsed()) return cmd_compare(common, compare, out, err);
  if (s_freq->parsed()) return cmd_freq(common, freq, out, err);
  if (s_div->parsed()) return cmd_diversity(common, diversity, out, err);
  if (s_sig->parsed()) return cmd_signif(common, signif, out, err);
  if (s_uni->parsed()) return cmd_unique(common, unique, out, err);
  if (s_pair->parsed()) return cmd_pairwise(common, pairwise, out, err);
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kUnsupportedFormat ? kExitUsage : kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace gramprof::cli
