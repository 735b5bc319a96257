#pragma once

// Derivation trees as exported by DELPH-IN parsers: parsing, serialization,
// occurrence extraction, and corpus file reading.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gramprof/category.hpp"

namespace gramprof {

// One node of a derivation. A node is either internal (has daughters) or a
// preterminal carrying the surface string of the token(s) it covers.
struct DerivationNode {
  std::int64_t node_id = 0;
  std::string label;
  double score = 0.0;
  std::int64_t span_start = 0;
  std::int64_t span_end = 0;
  std::vector<DerivationNode> daughters;
  std::optional<std::string> surface;

  bool is_terminal() const noexcept { return surface.has_value(); }
  std::int64_t span_width() const noexcept { return span_end - span_start; }

  friend bool operator==(const DerivationNode&, const DerivationNode&) = default;
};

struct SentenceRecord {
  std::string corpus_id;
  std::string item_id;
  std::optional<std::string> author;
  DerivationNode derivation;
};

// Parses one "(id label [score] start end daughters...)" derivation. A leading
// root-condition wrapper such as "(root_strict (...))" is accepted and
// dropped. Throws Error with kEmptyInput, kUnbalancedParens or kMalformedNode;
// the location offset points into `text`.
DerivationNode parse_derivation(std::string_view text);

// Canonical single-line form; parse_derivation(serialize_derivation(t)) == t.
std::string serialize_derivation(const DerivationNode& node);

struct Occurrence {
  std::string_view label;  // views into the tree passed to extract_occurrences
  Category hint = Category::kUnknown;
};

// Pre-order list of every internal and preterminal label. Surface strings
// are not occurrences.
std::vector<Occurrence> extract_occurrences(const DerivationNode& node);

std::size_t count_nodes(const DerivationNode& node) noexcept;
std::size_t count_terminals(const DerivationNode& node) noexcept;

enum class CorpusFormat { kUdfLines, kJsonl };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) noexcept;
std::string_view to_string(CorpusFormat format) noexcept;

struct ReadOptions {
  CorpusFormat format = CorpusFormat::kUdfLines;
  // Used for every record; for jsonl it overrides the per-line "corpus" field.
  std::string corpus_id;
  bool lenient = false;
  unsigned workers = 0;  // 0 = default_worker_count()
};

struct SkippedLine {
  std::size_t line = 0;
  std::string message;
};

struct CorpusReadResult {
  std::vector<SentenceRecord> records;  // sorted by (corpus_id, item_id)
  std::vector<SkippedLine> skipped;     // only populated in lenient mode
};

// Strict mode throws Error(kFormat) carrying the failing line. Duplicate
// (corpus_id, item_id) pairs are always fatal.
CorpusReadResult read_corpus(const std::filesystem::path& path, const ReadOptions& options);

// Same as read_corpus but over in-memory text; `source_name` only labels errors.
CorpusReadResult read_corpus_text(std::string_view text, const ReadOptions& options,
                                  std::string_view source_name = "<memory>");

// Natural item order: purely numeric ids compare numerically, everything else
// lexicographically; numeric ids sort before non-numeric ones.
bool item_id_less(std::string_view a, std::string_view b) noexcept;
bool record_less(const SentenceRecord& a, const SentenceRecord& b) noexcept;

}  // namespace gramprof
