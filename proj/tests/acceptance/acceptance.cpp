// Acceptance checks. One line per criterion:
//   [PASS|FAIL|SKIP] <n> <name>: <detail> (<elapsed>)
// Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"
#include "gramprof/error.hpp"
#include "gramprof/hierarchy.hpp"
#include "gramprof/report.hpp"
#include "gramprof/stats.hpp"
#include "oracles.hpp"

namespace {

using namespace gramprof;
namespace t = gramprof::testing;

// Pinned tolerances and limits.
constexpr double kMwuTol = 1e-6;
constexpr double kBhTol = 1e-12;
constexpr double kDiversityTol = 1e-9;
constexpr double kPlantedP = 0.01;
constexpr double kPcaResidual = 1e-6;
constexpr double kSeconds1 = 1.0;
constexpr double kSeconds2 = 1.0;
constexpr double kSeconds3 = 120.0;
constexpr double kSeconds4 = 30.0;
constexpr double kSeconds5 = 5.0;
constexpr double kShannonTol = 0.01;
constexpr double kCosineTol = 0.0005;

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kPass;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  Outcome done(const std::string& summary) const {
    return failure_.empty() ? Outcome{Outcome::kPass, summary} : Outcome{Outcome::kFail, failure_};
  }

 private:
  std::string failure_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::pair<std::string, double>> keyed(const std::vector<double>& p) {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back(std::to_string(i), p[i]);
  return out;
}

std::size_t rejected(const std::vector<double>& p, std::size_t m, double q) {
  std::size_t n = 0;
  for (const auto& a : bh_fdr(keyed(p), m)) n += a.p_adjusted <= q;
  return n;
}

// ---------------------------------------------------------------- 1

Outcome exact_mann_whitney() {
  Check c;
  const std::vector<double> xs{1, 2, 3};
  const std::vector<double> ys{4, 5, 6, 7, 8, 9};
  MwuOptions o;
  o.mode = MwuMode::kExact;
  const StatTestResult r = mann_whitney(xs, ys, o);
  const auto oracle = t::mwu_enumerate(xs, ys);
  c.expect(std::fabs(r.p_value - 2.0 / 84.0) <= kMwuTol, "p = " + fmt("%.8f", r.p_value));
  c.expect(std::fabs(oracle.p - 2.0 / 84.0) <= kMwuTol, "enumeration disagrees");
  c.expect(std::fabs(r.p_value - 0.0238) <= 0.00005, "p does not round to 0.0238");
  return c.done("p = " + fmt("%.5f", r.p_value) + " (2/84)");
}

// ---------------------------------------------------------------- 2

// Observed Mann-Whitney p-values below 0.05, one per listed comparison.
std::vector<double> listed_pvalues() {
  std::vector<double> p;
  const std::pair<double, int> groups[] = {{0.0091, 9}, {0.0219, 1}, {0.0238, 130}, {0.0275, 2},
                                           {0.0339, 2}, {0.0431, 1}, {0.0476, 39}};
  for (auto [v, n] : groups) p.insert(p.end(), static_cast<std::size_t>(n), v);
  return p;
}

Outcome bh_fdr_suite() {
  Check c;
  for (const auto& a : bh_fdr(keyed({0.01, 0.02, 0.03, 0.04}), 4)) {
    c.expect(std::fabs(a.p_adjusted - 0.04) <= kBhTol, "4-value example: " + fmt("%.6f", a.p_adjusted));
  }

  const std::vector<double> listed = listed_pvalues();
  // 289 constructions + 1105 lexical types + 99 rules compared per pair of groups.
  constexpr std::size_t kComparisons = 289 + 1105 + 99;
  c.expect(listed.size() == 184, "listed p-value count");
  c.expect(rejected(listed, kComparisons, 0.05) == 0, "listed values reject at m = 1493");
  c.expect(t::bh_rejections(listed, kComparisons, 0.05) == 0, "oracle rejects at m = 1493");
  c.expect(rejected(listed, 295, 0.05) == 0, "listed values reject at m = 295");
  c.expect(rejected(listed, 294, 0.05) > 0, "boundary moved: no rejection at m = 294");

  // Any list of values in [0.0091, 0.05) with at most 30 entries inside
  // m >= 170, and longer lists with m >= 5.5 L.
  SplitMix64 rng(20240501);
  std::size_t lists = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const bool short_list = trial % 2 == 0;
    const std::size_t len = short_list ? t::pick(rng, 1, 30) : t::pick(rng, 31, 184);
    const std::size_t floor_m = short_list ? 170 : static_cast<std::size_t>(std::ceil(5.5 * static_cast<double>(len)));
    const std::size_t m = floor_m + t::pick(rng, 0, 1500);
    std::vector<double> p(len);
    for (auto& v : p) v = 0.0091 + rng.uniform() * (0.05 - 0.0091);
    p[rng.below(len)] = 0.0091;
    if (t::coin(rng, 0.3)) {
      for (auto& v : p) v = t::coin(rng, 0.7) ? 0.0238 : v;
    }
    c.expect(rejected(p, m, 0.05) == 0,
             "random list of " + std::to_string(len) + " rejects at m = " + std::to_string(m));
    ++lists;
  }
  return c.done("4-value example all 0.04; 184 listed values: 0 of m = 1493 rejected "
                "(boundary m = 295); " + std::to_string(lists) + " random lists: 0 rejected");
}

// ---------------------------------------------------------------- 3

FrequencyProfile uniform_profile(std::size_t k) {
  FrequencyProfile p;
  p.category = Category::kConstruction;
  for (std::size_t i = 0; i < k; ++i) p.add("t" + std::to_string(i), 3);
  return p;
}

Outcome diversity_identities() {
  Check c;
  for (std::size_t k : {2u, 4u, 16u, 289u, 1105u}) {
    const FrequencyProfile p = uniform_profile(k);
    const double kd = static_cast<double>(k);
    c.expect(std::fabs(shannon(p) - std::log(kd)) <= kDiversityTol, "H(uniform-" + std::to_string(k) + ")");
    c.expect(std::fabs(gini_simpson(p) - (1.0 - 1.0 / kd)) <= kDiversityTol,
             "Gini-Simpson(uniform-" + std::to_string(k) + ")");
  }

  SplitMix64 rng(7);
  PermutationOptions o;
  o.resamples = 10000;
  o.seed = 1;
  const auto same = t::uniform_sentences(rng, 500, 30, 5);
  const StatTestResult identical = permutation_test(same, same, o);
  c.expect(identical.p_value == 1.0, "identical corpora p = " + fmt("%.6f", identical.p_value));

  const auto a = t::uniform_sentences(rng, 500, 50, 5);
  const auto b = t::uniform_sentences(rng, 500, 10, 5, 1000);
  const StatTestResult planted = permutation_test(a, b, o);
  c.expect(planted.p_value < kPlantedP, "planted gap p = " + fmt("%.6f", planted.p_value));
  return c.done("H = ln K, GS = 1 - 1/K for K in {2,4,16,289,1105}; identical p = 1; planted dH = " +
                fmt("%.4f", planted.statistic) + " (ln 5 = 1.6094), p = " +
                fmt("%.6f", planted.p_value));
}

// ---------------------------------------------------------------- 4

std::string node_name(std::size_t i) { return "n" + std::to_string(i); }

TypeHierarchy from_dag(const std::vector<std::vector<std::size_t>>& parents) {
  TypeHierarchy::Builder b;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    std::vector<std::string> sup;
    for (std::size_t p : parents[i]) sup.push_back(node_name(p));
    b.add_definition(node_name(i), sup);
  }
  return std::move(b).build();
}

std::string to_tdl(const std::vector<std::vector<std::size_t>>& parents) {
  std::string text;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    text += node_name(i) + " := ";
    if (parents[i].empty()) text += "*top*";
    for (std::size_t k = 0; k < parents[i].size(); ++k) {
      if (k) text += " & ";
      text += node_name(parents[i][k]);
    }
    text += " & [ F x ].\n";
  }
  return text;
}

Outcome parser_round_trip() {
  Check c;
  SplitMix64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const DerivationNode tree = t::random_tree(rng);
    const std::string once = serialize_derivation(tree);
    const std::string twice = serialize_derivation(parse_derivation(once));
    c.expect(once == twice, "round trip " + std::to_string(i) + " differs");
  }

  std::size_t planted = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = t::pick(rng, 2, 50);
    auto parents = t::random_dag(rng, n, 0.08);
    const auto reach = t::closure(parents);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t d = 0; d < n; ++d) {
        if (a != d && reach[a][d]) pairs.emplace_back(a, d);
      }
    }
    const auto [a, d] = pairs.empty() ? std::pair<std::size_t, std::size_t>{0, 0}
                                      : pairs[rng.below(pairs.size())];
    parents[a].push_back(d);
    ++planted;
    bool detected = false;
    try {
      parse_tdl_text(to_tdl(parents));
    } catch (const Error& e) {
      detected = e.code() == ErrorCode::kCycleDetected;
    }
    c.expect(detected, "planted cycle " + std::to_string(i) + " missed");
  }

  std::size_t queries = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = t::pick(rng, 1, 50);
    const auto parents = t::random_dag(rng, n, t::pick(rng, 1, 15) / 100.0);
    const TypeHierarchy h = i % 2 ? from_dag(parents) : parse_tdl_text(to_tdl(parents));
    const auto reach = t::closure(parents);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t d = 0; d < n; ++d) {
        ++queries;
        c.expect(subsumes(node_name(a), node_name(d), h) == reach[a][d],
                 "subsumes disagrees on DAG " + std::to_string(i));
      }
    }
  }
  return c.done("1000 trees byte-identical; " + std::to_string(planted) +
                " planted cycles detected; " + std::to_string(queries) +
                " subsumption queries on 100 DAGs match closure");
}

// ---------------------------------------------------------------- 5

Outcome pca_rank2() {
  Check c;
  SplitMix64 rng(5);
  double worst = 0.0;
  constexpr std::size_t kRows = 10;
  constexpr std::size_t kCols = 500;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> base(kCols), u(kCols), v(kCols);
    for (std::size_t j = 0; j < kCols; ++j) {
      base[j] = rng.uniform() / kCols;
      u[j] = (rng.uniform() - 0.5) / kCols;
      v[j] = (rng.uniform() - 0.5) / kCols;
    }
    std::vector<std::vector<double>> rows(kRows, std::vector<double>(kCols));
    Eigen::MatrixXd x(kRows, kCols);
    for (std::size_t i = 0; i < kRows; ++i) {
      const double a = rng.uniform() - 0.5;
      const double b = (rng.uniform() - 0.5) * 0.5;
      for (std::size_t j = 0; j < kCols; ++j) {
        rows[i][j] = base[j] + a * u[j] + b * v[j];
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    const Pca2Result r = pca2(rows);
    const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xc * xc.transpose());
    for (int k = 0; k < 2; ++k) {
      const Eigen::Index col = static_cast<Eigen::Index>(kRows) - 1 - k;
      const Eigen::VectorXd coords = es.eigenvectors().col(col) * std::sqrt(std::max(0.0, es.eigenvalues()(col)));
      double dot = 0.0;
      for (std::size_t i = 0; i < kRows; ++i) dot += coords(static_cast<Eigen::Index>(i)) * r.coordinates[i][static_cast<std::size_t>(k)];
      const double sign = dot >= 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < kRows; ++i) {
        worst = std::max(worst, std::fabs(r.coordinates[i][static_cast<std::size_t>(k)] - sign * coords(static_cast<Eigen::Index>(i))));
      }
    }
    // Rank 2: the projection reconstructs the centred data.
    for (std::size_t i = 0; i < kRows; ++i) {
      for (std::size_t j = 0; j < kCols; ++j) {
        const double rec = r.coordinates[i][0] * r.axes[0][j] + r.coordinates[i][1] * r.axes[1][j];
        worst = std::max(worst, std::fabs(rec - xc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
    }
    c.expect(r.explained_variance[0] >= r.explained_variance[1], "explained variances not sorted");
    c.expect(!r.degenerate, "rank-2 input flagged degenerate");
  }
  c.expect(worst <= kPcaResidual, "residual " + fmt("%.3e", worst));
  return c.done("20 matrices 10 x 500, max residual " + fmt("%.2e", worst) + ", variances descending");
}

// ---------------------------------------------------------------- 6

template <typename Map>
std::map<std::string, std::uint64_t> plain(const Map& m) {
  return {m.begin(), m.end()};
}

Outcome pipeline_oracle() {
  Check c;
  const TypeHierarchy& h = t::fixture_grammar();
  const auto records = t::fixture_human();
  c.expect(records.size() == 50, "fixture has " + std::to_string(records.size()) + " sentences");
  const auto lexicon = t::scan_lexicon(t::slurp(t::fixture("grammar/lexicon.tdl").string()));
  const auto oracle = t::line_scan(t::slurp(t::fixture("fixture_human.jsonl").string()), lexicon);
  const std::pair<Category, const std::map<std::string, std::uint64_t>*> cats[] = {
      {Category::kConstruction, &oracle.construction}, {Category::kLexicalRule, &oracle.lexrule},
      {Category::kLexicalType, &oracle.lextype},       {Category::kLexicalEntry, &oracle.lexentry},
      {Category::kAll, &oracle.all}};
  std::size_t compared = 0;
  for (const auto& [cat, want] : cats) {
    const auto got = plain(build_profile(records, h, cat).counts);
    c.expect(got == *want, std::string("profile mismatch for ") + std::string(to_string(cat)));
    compared += want->size();
  }

  ReadOptions o;
  o.corpus_id = "gpt";
  std::vector<FrequencyProfile> profiles;
  profiles.push_back(build_profile(records, h, Category::kConstruction));
  profiles.push_back(build_profile(read_corpus(t::fixture("fixture_llm.udf"), o).records, h,
                                   Category::kConstruction));
  o.corpus_id = "gpt2";
  profiles.push_back(build_profile(read_corpus(t::fixture("fixture_llm2.udf"), o).records, h,
                                   Category::kConstruction));
  const ComparisonReport r = build_comparison(profiles, Category::kConstruction);
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    c.expect(r.matrix[i][i] == 1.0, "diagonal not 1");
    for (std::size_t j = 0; j < r.matrix.size(); ++j) {
      c.expect(r.matrix[i][j] == r.matrix[j][i], "matrix not symmetric");
    }
  }
  std::ostringstream csv;
  emit_matrix_csv(r, csv);
  c.expect(csv.str().find("nyt,1.000000,") != std::string::npos, "serialized diagonal");
  return c.done(std::to_string(compared) + " identifier counts over 5 profiles equal the line scan; "
                "3 x 3 cosine matrix symmetric with unit diagonal");
}

// ---------------------------------------------------------------- 7

// Released data: GRAMMAR_PROFILE_DATA_DIR holds one file per dataset named
// <id>.jsonl or <id>.udf (original, wsj, falcon_07, llama_07, llama_13,
// llama_30, llama_65, mistral_07); GRAMMAR_PROFILE_ERG_DIR is the grammar.
Outcome full_data() {
  const char* erg = std::getenv("GRAMMAR_PROFILE_ERG_DIR");
  const char* data = std::getenv("GRAMMAR_PROFILE_DATA_DIR");
  if (!erg || !data) {
    return {Outcome::kSkip, "GRAMMAR_PROFILE_ERG_DIR / GRAMMAR_PROFILE_DATA_DIR not set"};
  }
  Check c;
  const std::vector<std::filesystem::path> dirs{erg};
  const TypeHierarchy h = parse_tdl(discover_tdl_sources(dirs));
  std::map<std::string, ClassifiedCorpus> corpora;
  for (const char* id : {"original", "wsj", "falcon_07", "llama_07", "llama_13", "llama_30",
                         "llama_65", "mistral_07"}) {
    for (auto [ext, format] : {std::pair{".jsonl", CorpusFormat::kJsonl},
                               std::pair{".udf", CorpusFormat::kUdfLines}}) {
      const std::filesystem::path p = std::filesystem::path(data) / (std::string(id) + ext);
      if (!std::filesystem::exists(p)) continue;
      ReadOptions o;
      o.format = format;
      o.corpus_id = id;
      o.lenient = true;
      corpora.emplace(id, classify_corpus(id, read_corpus(p, o).records, h));
    }
  }
  if (!corpora.count("original")) return {Outcome::kFail, "original.{jsonl,udf} not found"};
  const ClassifiedCorpus& human = corpora.at("original");

  const std::size_t want[] = {289, 99, 1105, 27311};
  for (Category cat : kCoreCategories) {
    const std::size_t got = profile_of(human, cat).support_size();
    c.expect(got == want[static_cast<std::size_t>(cat)],
             std::string(to_string(cat)) + " coverage " + std::to_string(got));
  }
  auto shannon_of = [&](const ClassifiedCorpus& cc, Category cat) { return shannon(profile_of(cc, cat)); };
  c.expect(std::fabs(shannon_of(human, Category::kConstruction) - 3.342) <= kShannonTol, "human construction H");
  c.expect(std::fabs(shannon_of(human, Category::kLexicalType) - 4.727) <= kShannonTol, "human lextype H");
  if (corpora.count("falcon_07")) {
    c.expect(std::fabs(shannon_of(corpora.at("falcon_07"), Category::kConstruction) - 3.221) <= kShannonTol, "falcon construction H");
    c.expect(std::fabs(shannon_of(corpora.at("falcon_07"), Category::kLexicalType) - 4.700) <= kShannonTol, "falcon lextype H");
  }
  if (corpora.count("llama_13")) {
    c.expect(std::fabs(shannon_of(corpora.at("llama_13"), Category::kLexicalType) - 4.877) <= kShannonTol, "llama_13 lextype H");
  }
  std::vector<const ClassifiedCorpus*> llms;
  for (const auto& [id, cc] : corpora) {
    if (id != "original" && id != "wsj") llms.push_back(&cc);
  }
  if (!llms.empty()) {
    const ClassifiedCorpus pooled = pool_corpora("llm-pooled", llms);
    c.expect(std::fabs(shannon_of(pooled, Category::kConstruction) - 3.265) <= kShannonTol, "pooled construction H");
  }
  if (corpora.count("wsj")) {
    const double cs = cosine(profile_of(corpora.at("wsj"), Category::kConstruction),
                             profile_of(human, Category::kConstruction));
    c.expect(std::fabs(cs - 0.9949) <= kCosineTol, "cosine(wsj, original) " + fmt("%.4f", cs));
  }
  return c.done("coverage, diversity and cosine match the released figures");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "exact Mann-Whitney", kSeconds1, exact_mann_whitney},
      {2, "BH-FDR properties", kSeconds2, bh_fdr_suite},
      {3, "diversity identities and permutation test", kSeconds3, diversity_identities},
      {4, "parser round trip, cycles, subsumption", kSeconds4, parser_round_trip},
      {5, "PCA on rank-2 matrices", kSeconds5, pca_rank2},
      {6, "pipeline oracle equivalence", 0.0, pipeline_oracle},
      {7, "full released data", 0.0, full_data},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status == Outcome::kPass && cr.limit > 0.0 && secs > cr.limit) {
      o = {Outcome::kFail, "took " + fmt("%.2f", secs) + " s, limit " + fmt("%.0f", cr.limit) + " s"};
    }
    const char* tag = o.status == Outcome::kPass ? "PASS" : o.status == Outcome::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] %d %s: %s (%.3f s)\n", tag, cr.id, cr.name, o.detail.c_str(), secs);
    failures += o.status == Outcome::kFail;
  }
  return failures == 0 ? 0 : 1;
}
