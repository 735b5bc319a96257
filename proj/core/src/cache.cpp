#include "gramprof/cache.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gramprof/error.hpp"
#include "gramprof/rng.hpp"

namespace gramprof {
namespace {

constexpr std::string_view kMagic{"GPCACHE\0", 8};
constexpr std::uint32_t kNoType = 0xffffffffu;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() {
    const auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }
  std::uint64_t u64() {
    const auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }
  std::string str() { return std::string(take(u32())); }
  std::string_view take(std::size_t n) {
    if (n > in_.size() - pos_) throw Error(ErrorCode::kFormat, "cache file is truncated");
    const auto out = in_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(CorpusRole role) noexcept {
  return role == CorpusRole::kLlm ? "llm" : "human";
}

std::optional<CorpusRole> parse_corpus_role(std::string_view name) noexcept {
  if (name == "human") return CorpusRole::kHuman;
  if (name == "llm") return CorpusRole::kLlm;
  return std::nullopt;
}

std::string encode_cache(const CorpusCache& cache) {
  Writer w;
  w.raw(kMagic);
  w.u32(kCacheVersion);
  w.u64(cache.grammar_checksum);
  w.u64(cache.source_checksum);
  w.str(cache.corpus.corpus_id);
  w.str(to_string(cache.role));
  w.str(cache.format);
  w.str(cache.source_path);
  w.u64(cache.skipped_lines);
  w.u32(static_cast<std::uint32_t>(cache.corpus.labels.size()));
  for (const auto& l : cache.corpus.labels) {
    w.str(l.label);
    w.u8(static_cast<std::uint8_t>(l.category));
    w.u32(l.lexical_type ? *l.lexical_type : kNoType);
  }
  w.u64(cache.corpus.sentences.size());
  for (const auto& s : cache.corpus.sentences) {
    w.str(s.item_id);
    w.u8(s.author ? 1 : 0);
    if (s.author) w.str(*s.author);
    w.u32(static_cast<std::uint32_t>(s.labels.size()));
    for (std::uint32_t id : s.labels) w.u32(id);
  }
  w.u64(fnv1a64(w.bytes()));
  return std::move(w.bytes());
}

CorpusCache decode_cache(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 12 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kFormat, "not a profile cache file");
  }
  {
    Reader trailer(bytes.substr(bytes.size() - 8));
    if (trailer.u64() != fnv1a64(bytes.substr(0, bytes.size() - 8))) {
      throw Error(ErrorCode::kFormat, "cache checksum mismatch");
    }
  }
  Reader r(bytes.substr(0, bytes.size() - 8));
  r.take(kMagic.size());
  const std::uint32_t version = r.u32();
  if (version != kCacheVersion) {
    throw Error(ErrorCode::kFormat, "unsupported cache version " + std::to_string(version));
  }
  CorpusCache cache;
  cache.grammar_checksum = r.u64();
  cache.source_checksum = r.u64();
  cache.corpus.corpus_id = r.str();
  const auto role = parse_corpus_role(r.str());
  if (!role) throw Error(ErrorCode::kFormat, "bad corpus role in cache");
  cache.role = *role;
  cache.format = r.str();
  cache.source_path = r.str();
  cache.skipped_lines = r.u64();
  const std::uint32_t n_labels = r.u32();
  cache.corpus.labels.resize(n_labels);
  for (auto& l : cache.corpus.labels) {
    l.label = r.str();
    const std::uint8_t cat = r.u8();
    if (cat > static_cast<std::uint8_t>(Category::kUnknown)) {
      throw Error(ErrorCode::kFormat, "bad category in cache");
    }
    l.category = static_cast<Category>(cat);
    const std::uint32_t type = r.u32();
    if (type != kNoType) {
      if (type >= n_labels) throw Error(ErrorCode::kFormat, "bad lexical type index in cache");
      l.lexical_type = type;
    }
  }
  const std::uint64_t n_sentences = r.u64();
  for (std::uint64_t i = 0; i < n_sentences; ++i) {
    ClassifiedSentence s;
    s.item_id = r.str();
    if (r.u8() != 0) s.author = r.str();
    const std::uint32_t n = r.u32();
    s.labels.reserve(n);
    for (std::uint32_t k = 0; k < n; ++k) {
      const std::uint32_t id = r.u32();
      if (id >= n_labels) throw Error(ErrorCode::kFormat, "bad label index in cache");
      s.labels.push_back(id);
    }
    cache.corpus.sentences.push_back(std::move(s));
  }
  return cache;
}

void write_cache(const CorpusCache& cache, const std::filesystem::path& path) {
  const std::string bytes = encode_cache(cache);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    SourceLocation where;
    where.file = path.string();
    throw Error(ErrorCode::kIo, "cannot write cache file", where);
  }
}

CorpusCache read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    SourceLocation where;
    where.file = path.string();
    throw Error(ErrorCode::kMissingCache, "no profile cache; run 'ingest' first", where);
  }
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return decode_cache(bytes);
  } catch (const Error& e) {
    SourceLocation where;
    where.file = path.string();
    throw Error(e.code(), e.message(), where);
  }
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    SourceLocation where;
    where.file = path.string();
    throw Error(ErrorCode::kIo, "cannot open file", where);
  }
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    hash = fnv1a64(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), hash);
  }
  return hash;
}

}  // namespace gramprof
