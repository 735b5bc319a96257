#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gramprof/derivation.hpp"
#include "gramprof/hierarchy.hpp"

namespace gramprof::testing {

inline std::filesystem::path fixture_dir() { return GRAMPROF_FIXTURE_DIR; }

inline std::filesystem::path fixture(const std::string& name) { return fixture_dir() / name; }

inline const TypeHierarchy& fixture_grammar() {
  static const TypeHierarchy h = [] {
    const std::vector<std::filesystem::path> dirs{fixture("grammar")};
    return parse_tdl(discover_tdl_sources(dirs));
  }();
  return h;
}

inline std::vector<SentenceRecord> fixture_human() {
  ReadOptions o;
  o.format = CorpusFormat::kJsonl;
  return read_corpus(fixture("fixture_human.jsonl"), o).records;
}

inline std::vector<SentenceRecord> fixture_llm() {
  ReadOptions o;
  o.corpus_id = "gpt";
  return read_corpus(fixture("fixture_llm.udf"), o).records;
}

}  // namespace gramprof::testing
