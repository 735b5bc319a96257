#pragma once

// Versioned binary cache of a classified corpus. Layout (little-endian):
//
//   "GPCACHE\0"            8-byte magic
//   u32 version            kCacheVersion
//   u64 grammar_checksum   TypeHierarchy::checksum() at ingest
//   u64 source_checksum    FNV-1a 64 of the corpus file bytes
//   str corpus_id, str role, str format, str source_path
//   u64 skipped_lines
//   u32 n_labels, then per label: str label, u8 category, u32 lexical_type
//                                 (0xffffffff = none)
//   u64 n_sentences, then per sentence: str item_id, u8 has_author,
//                                 [str author], u32 n, n x u32 label index
//   u64 trailer            FNV-1a 64 of every preceding byte
//
// where str = u32 byte length + UTF-8 bytes.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "gramprof/profile.hpp"

namespace gramprof {

inline constexpr std::uint32_t kCacheVersion = 1;

enum class CorpusRole : std::uint8_t { kHuman, kLlm };

std::string_view to_string(CorpusRole role) noexcept;
std::optional<CorpusRole> parse_corpus_role(std::string_view name) noexcept;

struct CorpusCache {
  std::uint64_t grammar_checksum = 0;
  std::uint64_t source_checksum = 0;
  CorpusRole role = CorpusRole::kHuman;
  std::string format;
  std::string source_path;
  std::uint64_t skipped_lines = 0;
  ClassifiedCorpus corpus;
};

std::string encode_cache(const CorpusCache& cache);
// Throws Error(kFormat) for bad magic, version or checksum.
CorpusCache decode_cache(std::string_view bytes);

// Throws Error(kIo) on write failure.
void write_cache(const CorpusCache& cache, const std::filesystem::path& path);
// Throws Error(kMissingCache) when the file does not exist.
CorpusCache read_cache(const std::filesystem::path& path);

std::uint64_t file_checksum(const std::filesystem::path& path);

}  // namespace gramprof
