#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gramprof/error.hpp"
#include "gramprof/report.hpp"
#include "gramprof/text_format.hpp"

namespace gramprof {
namespace {

using Json = nlohmann::ordered_json;

double rounded(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

Json rounded_array(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(rounded(x));
  return out;
}

Json header(std::string_view kind, Category category) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = kind;
  j["category"] = to_string(category);
  return j;
}

void write_json(const Json& j, std::ostream& out) { out << j.dump(2) << '\n'; }

[[noreturn]] void unsupported(std::string_view kind, ReportFormat f) {
  throw Error(ErrorCode::kUnsupportedFormat,
              std::string(kind) + " report has no " + std::string(to_string(f)) + " rendering");
}

std::string_view direction_name(int d) {
  if (d > 0) return "human>llm";
  if (d < 0) return "llm>human";
  return "equal";
}

Json test_json(const StatTestResult& t) {
  Json j;
  j["key"] = t.key;
  j["statistic"] = rounded(t.statistic);
  j["p_value"] = rounded(t.p_value);
  j["p_adjusted"] = t.p_adjusted ? Json(rounded(*t.p_adjusted)) : Json(nullptr);
  j["method"] = t.method;
  return j;
}

Json ranked_json(const std::vector<RankedItem>& items) {
  Json out = Json::array();
  for (const auto& it : items) {
    Json j;
    j["identifier"] = it.identifier;
    j["count"] = it.count_a;
    j["count_other"] = it.count_b;
    out.push_back(std::move(j));
  }
  return out;
}

void scatter_svg(const ComparisonReport& r, std::ostream& out) {
  const Pca2Result& pca = *r.pca;
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 480.0;
  constexpr double kMargin = 60.0;

  double lo[2] = {0.0, 0.0};
  double hi[2] = {0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    lo[c] = hi[c] = pca.coordinates.front()[c];
    for (const auto& p : pca.coordinates) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
    const double span = hi[c] - lo[c];
    const double pad = span > 0.0 ? 0.05 * span : 1.0;
    lo[c] -= pad;
    hi[c] += pad;
  }
  const auto sx = [&](double x) {
    return kMargin + (x - lo[0]) / (hi[0] - lo[0]) * (kWidth - 2 * kMargin);
  };
  const auto sy = [&](double y) {
    return kHeight - kMargin - (y - lo[1]) / (hi[1] - lo[1]) * (kHeight - 2 * kMargin);
  };
  const auto f = [](double v) { return format_fixed(v, 2); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "  <title>PCA " << xml_escape(to_string(r.category)) << "</title>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  out << "  <g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out << "    <line x1=\"" << f(kMargin) << "\" y1=\"" << f(kHeight - kMargin) << "\" x2=\""
      << f(kWidth - kMargin) << "\" y2=\"" << f(kHeight - kMargin) << "\"/>\n";
  out << "    <line x1=\"" << f(kMargin) << "\" y1=\"" << f(kMargin) << "\" x2=\"" << f(kMargin)
      << "\" y2=\"" << f(kHeight - kMargin) << "\"/>\n";
  out << "  </g>\n";
  out << "  <text class=\"xlabel\" x=\"320.00\" y=\"" << f(kHeight - 20)
      << "\" text-anchor=\"middle\">PC1 (variance " << format_fixed(pca.explained_variance[0])
      << ")</text>\n";
  out << "  <text class=\"ylabel\" x=\"20.00\" y=\"240.00\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 20 240)\">PC2 (variance "
      << format_fixed(pca.explained_variance[1]) << ")</text>\n";
  out << "  <g class=\"points\">\n";
  for (std::size_t i = 0; i < r.corpora.size(); ++i) {
    const double x = sx(pca.coordinates[i][0]);
    const double y = sy(pca.coordinates[i][1]);
    out << "    <g class=\"point\" data-corpus=\"" << xml_escape(r.corpora[i]) << "\" data-pc1=\""
        << format_fixed(pca.coordinates[i][0]) << "\" data-pc2=\""
        << format_fixed(pca.coordinates[i][1]) << "\">\n";
    out << "      <circle cx=\"" << f(x) << "\" cy=\"" << f(y)
        << "\" r=\"4\" fill=\"steelblue\"/>\n";
    out << "      <text x=\"" << f(x + 6) << "\" y=\"" << f(y - 6) << "\">"
        << xml_escape(r.corpora[i]) << "</text>\n";
    out << "    </g>\n";
  }
  out << "  </g>\n";
  out << "</svg>\n";
}

}  // namespace

std::string_view to_string(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kSvgScatter:
      return "svg";
  }
  return "csv";
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "svg" || name == "svg-scatter") return ReportFormat::kSvgScatter;
  throw Error(ErrorCode::kUnsupportedFormat, "unknown output format '" + std::string(name) + "'");
}

// ------------------------------------------------------------ comparison

void emit(const ComparisonReport& r, ReportFormat f, std::ostream& out) {
  switch (f) {
    case ReportFormat::kCsv:
      out << "a,b,cosine\n";
      for (const auto& p : r.pairs) {
        out << csv_field(p.a) << ',' << csv_field(p.b) << ',' << format_fixed(p.cosine) << '\n';
      }
      return;
    case ReportFormat::kJson: {
      Json j = header("comparison", r.category);
      j["corpora"] = r.corpora;
      Json matrix = Json::array();
      for (const auto& row : r.matrix) matrix.push_back(rounded_array(row));
      j["matrix"] = std::move(matrix);
      Json pairs = Json::array();
      for (const auto& p : r.pairs) {
        pairs.push_back(Json{{"a", p.a}, {"b", p.b}, {"cosine", rounded(p.cosine)}});
      }
      j["pairs"] = std::move(pairs);
      if (r.pca) {
        Json pca;
        pca["degenerate"] = r.pca->degenerate;
        pca["explained_variance"] = {rounded(r.pca->explained_variance[0]),
                                     rounded(r.pca->explained_variance[1])};
        Json coords = Json::array();
        for (std::size_t i = 0; i < r.corpora.size(); ++i) {
          coords.push_back(Json{{"corpus", r.corpora[i]},
                                {"pc1", rounded(r.pca->coordinates[i][0])},
                                {"pc2", rounded(r.pca->coordinates[i][1])}});
        }
        pca["coordinates"] = std::move(coords);
        j["pca"] = std::move(pca);
      } else {
        j["pca"] = nullptr;
      }
      write_json(j, out);
      return;
    }
    case ReportFormat::kSvgScatter:
      if (!r.pca) unsupported("comparison (fewer than 3 corpora)", f);
      scatter_svg(r, out);
      return;
  }
}

void emit_matrix_csv(const ComparisonReport& r, std::ostream& out) {
  out << "corpus";
  for (const auto& id : r.corpora) out << ',' << csv_field(id);
  out << '\n';
  for (std::size_t i = 0; i < r.corpora.size(); ++i) {
    out << csv_field(r.corpora[i]);
    for (double v : r.matrix[i]) out << ',' << format_fixed(v);
    out << '\n';
  }
}

// ------------------------------------------------------------- frequency

void emit(const FrequencyComparison& r, ReportFormat f, std::ostream& out) {
  switch (f) {
    case ReportFormat::kCsv: {
      out << "identifier,pooled_count,human_mean,llm_mean,direction";
      for (const auto& id : r.humans) out << ',' << csv_field("rel_freq:" + id);
      for (const auto& id : r.llms) out << ',' << csv_field("rel_freq:" + id);
      for (const auto& id : r.humans) out << ',' << csv_field("per_sentence:" + id);
      for (const auto& id : r.llms) out << ',' << csv_field("per_sentence:" + id);
      out << '\n';
      for (const auto& row : r.rows) {
        out << csv_field(row.identifier) << ',' << row.pooled_count << ','
            << format_fixed(row.human_mean) << ',' << format_fixed(row.llm_mean) << ','
            << direction_name(row.direction);
        for (const auto* v : {&row.human_rel, &row.llm_rel, &row.human_rate, &row.llm_rate}) {
          for (double x : *v) out << ',' << format_fixed(x);
        }
        out << '\n';
      }
      return;
    }
    case ReportFormat::kJson: {
      Json j = header("frequency", r.category);
      j["humans"] = r.humans;
      j["llms"] = r.llms;
      Json rows = Json::array();
      for (const auto& row : r.rows) {
        Json x;
        x["identifier"] = row.identifier;
        x["pooled_count"] = row.pooled_count;
        x["human_mean"] = rounded(row.human_mean);
        x["llm_mean"] = rounded(row.llm_mean);
        x["direction"] = direction_name(row.direction);
        x["human_rel_freq"] = rounded_array(row.human_rel);
        x["llm_rel_freq"] = rounded_array(row.llm_rel);
        x["human_per_sentence"] = rounded_array(row.human_rate);
        x["llm_per_sentence"] = rounded_array(row.llm_rate);
        rows.push_back(std::move(x));
      }
      j["rows"] = std::move(rows);
      write_json(j, out);
      return;
    }
    case ReportFormat::kSvgScatter:
      unsupported("frequency", f);
  }
}

// -------------------------------------------------------------- pairwise

void emit(const PairwiseVarianceReport& r, ReportFormat f, std::ostream& out) {
  switch (f) {
    case ReportFormat::kCsv:
      out << "group,a,b,cosine\n";
      for (const auto& g : r.groups) {
        for (const auto& p : g.pairs) {
          out << g.name << ',' << csv_field(p.a) << ',' << csv_field(p.b) << ','
              << format_fixed(p.cosine) << '\n';
        }
      }
      return;
    case ReportFormat::kJson: {
      Json j = header("pairwise", r.category);
      j["normalization"] = to_string(r.normalization);
      j["humans"] = r.humans;
      j["llms"] = r.llms;
      Json groups = Json::array();
      for (const auto& g : r.groups) {
        Json x;
        x["group"] = g.name;
        x["size"] = g.pairs.size();
        x["mean"] = rounded(g.mean);
        x["min"] = rounded(g.min);
        x["max"] = rounded(g.max);
        x["variance"] = rounded(g.variance);
        Json pairs = Json::array();
        for (const auto& p : g.pairs) {
          pairs.push_back(Json{{"a", p.a}, {"b", p.b}, {"cosine", rounded(p.cosine)}});
        }
        x["pairs"] = std::move(pairs);
        groups.push_back(std::move(x));
      }
      j["groups"] = std::move(groups);
      write_json(j, out);
      return;
    }
    case ReportFormat::kSvgScatter:
      unsupported("pairwise", f);
  }
}

// ------------------------------------------------------------- diversity

void emit(const DiversityReport& r, ReportFormat f, std::ostream& out) {
  switch (f) {
    case ReportFormat::kCsv:
      out << "corpus,sentences,occurrences,support,shannon_h,gini_simpson\n";
      for (const auto& row : r.rows) {
        out << csv_field(row.corpus_id) << ',' << row.sentences << ',' << row.occurrences << ','
            << row.support << ',' << format_fixed(row.score.shannon_h) << ','
            << format_fixed(row.score.gini_simpson) << '\n';
      }
      return;
    case ReportFormat::kJson: {
      Json j = header("diversity", r.category);
      j["entropy_base"] = "e";
      Json rows = Json::array();
      for (const auto& row : r.rows) {
        Json x;
        x["corpus"] = row.corpus_id;
        x["sentences"] = row.sentences;
        x["occurrences"] = row.occurrences;
        x["support"] = row.support;
        x["shannon_h"] = rounded(row.score.shannon_h);
        x["gini_simpson"] = rounded(row.score.gini_simpson);
        rows.push_back(std::move(x));
      }
      j["rows"] = std::move(rows);
      Json tests = Json::array();
      for (const auto& t : r.tests) tests.push_back(test_json(t));
      j["tests"] = std::move(tests);
      write_json(j, out);
      return;
    }
    case ReportFormat::kSvgScatter:
      unsupported("diversity", f);
  }
}

void emit_tests_csv(std::span<const StatTestResult> tests, std::ostream& out) {
  out << "key,statistic,p_value,p_adjusted,method\n";
  for (const auto& t : tests) {
    out << csv_field(t.key) << ',' << format_fixed(t.statistic) << ',' << format_fixed(t.p_value)
        << ',' << (t.p_adjusted ? format_fixed(*t.p_adjusted) : std::string()) << ','
        << csv_field(t.method) << '\n';
  }
}

// ---------------------------------------------------------- significance

void emit(const SignificanceReport& r, ReportFormat f, std::ostream& out) {
  switch (f) {
    case ReportFormat::kCsv:
      out << "identifier,u,p_value,p_adjusted,significant_raw,significant_adjusted";
      for (const auto& id : r.group_a) out << ',' << csv_field("a:" + id);
      for (const auto& id : r.group_b) out << ',' << csv_field("b:" + id);
      out << '\n';
      for (const auto& row : r.rows) {
        out << csv_field(row.identifier) << ',' << format_fixed(row.u) << ','
            << format_fixed(row.p_value) << ',' << format_fixed(row.p_adjusted) << ','
            << (row.p_value <= r.alpha ? "yes" : "no") << ','
            << (row.p_adjusted <= r.alpha ? "yes" : "no");
        for (double v : row.a_values) out << ',' << format_fixed(v);
        for (double v : row.b_values) out << ',' << format_fixed(v);
        out << '\n';
      }
      return;
    case ReportFormat::kJson: {
      Json j = header("significance", r.category);
      j["method"] = r.method;
      j["group_a"] = r.group_a;
      j["group_b"] = r.group_b;
      j["m"] = r.m;
      j["alpha"] = rounded(r.alpha);
      j["tested"] = r.rows.size();
      j["significant_raw"] = r.raw_significant();
      j["significant_adjusted"] = r.adjusted_significant();
      Json rows = Json::array();
      for (const auto& row : r.rows) {
        Json x;
        x["identifier"] = row.identifier;
        x["u"] = rounded(row.u);
        x["p_value"] = rounded(row.p_value);
        x["p_adjusted"] = rounded(row.p_adjusted);
        x["a_values"] = rounded_array(row.a_values);
        x["b_values"] = rounded_array(row.b_values);
        rows.push_back(std::move(x));
      }
      j["rows"] = std::move(rows);
      write_json(j, out);
      return;
    }
    case ReportFormat::kSvgScatter:
      unsupported("significance", f);
  }
}

// -------------------------------------------------------------- unique

void emit(const UniqueItemsReport& r, ReportFormat f, std::ostream& out) {
  switch (f) {
    case ReportFormat::kCsv:
      out << "reference,other,side,identifier,count,count_other\n";
      for (const auto& c : r.comparisons) {
        for (const auto& [side, items] :
             {std::pair{"reference_only", &c.reference_only}, std::pair{"other_only", &c.other_only}}) {
          for (const auto& it : *items) {
            out << csv_field(c.reference) << ',' << csv_field(c.other) << ',' << side << ','
                << csv_field(it.identifier) << ',' << it.count_a << ',' << it.count_b << '\n';
          }
        }
      }
      return;
    case ReportFormat::kJson: {
      Json j = header("unique", r.category);
      j["min_count"] = r.min_count;
      j["max_other_count"] = r.max_other_count;
      Json comps = Json::array();
      for (const auto& c : r.comparisons) {
        Json x;
        x["reference"] = c.reference;
        x["other"] = c.other;
        x["not_in"] = c.support.not_in;
        x["only_in"] = c.support.only_in;
        x["shared"] = c.support.shared;
        x["reference_only"] = ranked_json(c.reference_only);
        x["other_only"] = ranked_json(c.other_only);
        comps.push_back(std::move(x));
      }
      j["comparisons"] = std::move(comps);
      write_json(j, out);
      return;
    }
    case ReportFormat::kSvgScatter:
      unsupported("unique", f);
  }
}

void emit_support_csv(const UniqueItemsReport& r, std::ostream& out) {
  out << "reference,other,not_in,only_in,shared\n";
  for (const auto& c : r.comparisons) {
    out << csv_field(c.reference) << ',' << csv_field(c.other) << ',' << c.support.not_in << ','
        << c.support.only_in << ',' << c.support.shared << '\n';
  }
}

// ------------------------------------------------------------- files

template <typename Report>
void emit_file(const Report& r, ReportFormat f, const std::filesystem::path& path) {
  std::ostringstream text;
  emit(r, f, text);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  SourceLocation where;
  where.file = path.string();
  if (!out) throw Error(ErrorCode::kIo, "cannot open output file", where);
  out << text.str();
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write output file", where);
}

template void emit_file(const ComparisonReport&, ReportFormat, const std::filesystem::path&);
template void emit_file(const FrequencyComparison&, ReportFormat, const std::filesystem::path&);
template void emit_file(const PairwiseVarianceReport&, ReportFormat, const std::filesystem::path&);
template void emit_file(const DiversityReport&, ReportFormat, const std::filesystem::path&);
template void emit_file(const SignificanceReport&, ReportFormat, const std::filesystem::path&);
template void emit_file(const UniqueItemsReport&, ReportFormat, const std::filesystem::path&);

}  // namespace gramprof
