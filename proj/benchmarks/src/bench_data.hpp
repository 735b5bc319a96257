#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gramprof/derivation.hpp"
#include "gramprof/hierarchy.hpp"

namespace gramprof::bench {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(GRAMPROF_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const TypeHierarchy& grammar() {
  static const TypeHierarchy h = [] {
    std::vector<std::filesystem::path> roots{fixture("grammar")};
    return parse_tdl(discover_tdl_sources(roots));
  }();
  return h;
}

// The human fixture repeated `copies` times under fresh item ids.
inline std::vector<SentenceRecord> scaled_corpus(std::size_t copies) {
  ReadOptions opts;
  opts.format = CorpusFormat::kJsonl;
  auto base = read_corpus(fixture("fixture_human.jsonl"), opts).records;
  std::vector<SentenceRecord> out;
  out.reserve(base.size() * copies);
  for (std::size_t c = 0; c < copies; ++c) {
    for (const auto& r : base) {
      out.push_back(r);
      out.back().item_id = std::to_string(c) + "-" + r.item_id;
    }
  }
  return out;
}

}  // namespace gramprof::bench
