#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gramprof/derivation.hpp"
#include "gramprof/error.hpp"
#include "gramprof/parallel.hpp"

namespace gramprof {
namespace {

struct PendingLine {
  std::size_t line = 0;
  std::string_view text;
};

struct ParsedLine {
  std::optional<SentenceRecord> record;
  std::string error;
};

std::string_view trim(std::string_view s) noexcept {
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<PendingLine> split_lines(std::string_view text) {
  std::vector<PendingLine> lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = trim(text.substr(start, end - start));
    if (!line.empty() && line.front() != '#') lines.push_back({line_no, line});
    start = end + 1;
  }
  return lines;
}

ParsedLine parse_udf_line(const PendingLine& pending, const ReadOptions& options) {
  ParsedLine out;
  try {
    std::string_view body = pending.text;
    std::string item = std::to_string(pending.line);
    if (body.front() != '(') {
      const auto tab = body.find('\t');
      if (tab == std::string_view::npos) {
        out.error = "expected a derivation or 'item<TAB>derivation'";
        return out;
      }
      item = std::string(trim(body.substr(0, tab)));
      body = trim(body.substr(tab + 1));
      if (item.empty()) {
        out.error = "empty item id";
        return out;
      }
    }
    SentenceRecord rec;
    rec.corpus_id = options.corpus_id;
    rec.item_id = std::move(item);
    rec.derivation = parse_derivation(body);
    out.record = std::move(rec);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

ParsedLine parse_jsonl_line(const PendingLine& pending, const ReadOptions& options) {
  ParsedLine out;
  try {
    const auto obj = nlohmann::json::parse(pending.text);
    if (!obj.is_object()) {
      out.error = "line is not a JSON object";
      return out;
    }
    SentenceRecord rec;
    if (!options.corpus_id.empty()) {
      rec.corpus_id = options.corpus_id;
    } else if (auto it = obj.find("corpus"); it != obj.end() && it->is_string()) {
      rec.corpus_id = it->get<std::string>();
    }
    if (rec.corpus_id.empty()) {
      out.error = "missing \"corpus\"";
      return out;
    }
    const auto item = obj.find("item");
    if (item == obj.end() || !(item->is_string() || item->is_number_integer())) {
      out.error = "missing \"item\"";
      return out;
    }
    rec.item_id = item->is_string() ? item->get<std::string>() : item->dump();
    if (rec.item_id.empty()) {
      out.error = "empty \"item\"";
      return out;
    }
    if (auto author = obj.find("author"); author != obj.end() && !author->is_null()) {
      if (!author->is_string()) {
        out.error = "\"author\" must be a string";
        return out;
      }
      rec.author = author->get<std::string>();
    }
    const auto deriv = obj.find("deriv");
    if (deriv == obj.end() || !deriv->is_string()) {
      out.error = "missing \"deriv\"";
      return out;
    }
    rec.derivation = parse_derivation(deriv->get<std::string>());
    out.record = std::move(rec);
  } catch (const nlohmann::json::exception& e) {
    out.error = std::string("invalid JSON: ") + e.what();
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

bool all_digits(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) noexcept {
  if (name == "udf-lines" || name == "udf") return CorpusFormat::kUdfLines;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  return std::nullopt;
}

std::string_view to_string(CorpusFormat format) noexcept {
  return format == CorpusFormat::kJsonl ? "jsonl" : "udf-lines";
}

bool item_id_less(std::string_view a, std::string_view b) noexcept {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na != nb) return na;
  if (na) {
    const auto strip = [](std::string_view s) {
      const auto p = s.find_first_not_of('0');
      return p == std::string_view::npos ? std::string_view{} : s.substr(p);
    };
    const auto sa = strip(a);
    const auto sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

bool record_less(const SentenceRecord& a, const SentenceRecord& b) noexcept {
  if (a.corpus_id != b.corpus_id) return a.corpus_id < b.corpus_id;
  return item_id_less(a.item_id, b.item_id);
}

CorpusReadResult read_corpus_text(std::string_view text, const ReadOptions& options,
                                  std::string_view source_name) {
  if (options.format == CorpusFormat::kUdfLines && options.corpus_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "udf-lines input needs a corpus id");
  }
  const std::vector<PendingLine> lines = split_lines(text);
  std::vector<ParsedLine> parsed(lines.size());
  parallel_chunks(lines.size(), options.workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      parsed[i] = options.format == CorpusFormat::kJsonl ? parse_jsonl_line(lines[i], options)
                                                         : parse_udf_line(lines[i], options);
    }
  });

  CorpusReadResult result;
  std::vector<std::pair<SentenceRecord, std::size_t>> with_lines;
  with_lines.reserve(parsed.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!parsed[i].record) {
      if (!options.lenient) {
        SourceLocation where;
        where.file = std::string(source_name);
        where.line = lines[i].line;
        throw Error(ErrorCode::kFormat, parsed[i].error, where);
      }
      result.skipped.push_back({lines[i].line, parsed[i].error});
      continue;
    }
    with_lines.emplace_back(std::move(*parsed[i].record), lines[i].line);
  }

  std::stable_sort(with_lines.begin(), with_lines.end(),
                   [](const auto& a, const auto& b) { return record_less(a.first, b.first); });
  for (std::size_t i = 1; i < with_lines.size(); ++i) {
    const auto& prev = with_lines[i - 1].first;
    const auto& cur = with_lines[i].first;
    if (prev.corpus_id == cur.corpus_id && prev.item_id == cur.item_id) {
      SourceLocation where;
      where.file = std::string(source_name);
      where.line = std::max(with_lines[i - 1].second, with_lines[i].second);
      throw Error(ErrorCode::kDuplicateItemId,
                  "item '" + cur.item_id + "' of corpus '" + cur.corpus_id + "' also on line " +
                      std::to_string(std::min(with_lines[i - 1].second, with_lines[i].second)),
                  where);
    }
  }
  result.records.reserve(with_lines.size());
  for (auto& [rec, line] : with_lines) result.records.push_back(std::move(rec));
  return result;
}

CorpusReadResult read_corpus(const std::filesystem::path& path, const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    SourceLocation where;
    where.file = path.string();
    throw Error(ErrorCode::kIo, "cannot open corpus file", where);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_corpus_text(buf.str(), options, path.string());
}

}  // namespace gramprof
