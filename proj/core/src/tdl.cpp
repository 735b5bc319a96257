#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gramprof/error.hpp"
#include "gramprof/hierarchy.hpp"

namespace gramprof {
namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Identifier characters as accepted by common DELPH-IN tooling.
bool is_ident_char(char c) noexcept {
  return !is_space(c) && std::strchr("!\"#$%&'(),./:;<=>[\\]^|", c) == nullptr && c != '\0';
}

class TdlReader {
 public:
  TdlReader(std::string_view text, SourceRole role, std::string_view file,
            TypeHierarchy::Builder& builder)
      : text_(text), role_(role), file_(file), builder_(builder) {
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (text_[i] == '\n') newlines_.push_back(i);
    }
  }

  void run() {
    while (true) {
      skip_trivia();
      if (at_end()) return;
      const std::size_t start = pos_;
      const char c = peek();
      if (c == ':') {
        skip_statement();
      } else if (c == '%') {
        ++pos_;
        if (!at_end() && peek() == '(') {
          skip_balanced(start);  // %(letter-set ...), %(wild-card ...)
        } else {
          skip_statement();
        }
      } else if (is_ident_char(c)) {
        read_definition(start);
      } else {
        warn(start, std::string("unexpected character '") + c + "' at top level");
        ++pos_;
        skip_statement();
      }
    }
  }

 private:
  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool looking_at(std::string_view s) const noexcept { return text_.substr(pos_, s.size()) == s; }

  std::size_t line_of(std::size_t offset) const noexcept {
    return static_cast<std::size_t>(std::lower_bound(newlines_.begin(), newlines_.end(), offset) -
                                    newlines_.begin()) +
           1;
  }

  void warn(std::size_t at, std::string message) {
    builder_.add_warning({std::string(file_), line_of(at), std::move(message)});
  }

  [[noreturn]] void unterminated(std::size_t start) const {
    SourceLocation where;
    where.file = std::string(file_);
    where.line = line_of(start);
    throw Error(ErrorCode::kUnterminatedDefinition, "definition is not terminated by '.'", where);
  }

  void skip_block_comment(std::size_t start) {
    int depth = 0;
    while (!at_end()) {
      if (looking_at("#|")) {
        ++depth;
        pos_ += 2;
      } else if (looking_at("|#")) {
        pos_ += 2;
        if (--depth == 0) return;
      } else {
        ++pos_;
      }
    }
    unterminated(start);
  }

  void skip_trivia() {
    while (!at_end()) {
      const char c = peek();
      if (is_space(c)) {
        ++pos_;
      } else if (c == ';') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else if (looking_at("#|")) {
        skip_block_comment(pos_);
      } else {
        return;
      }
    }
  }

  void skip_string(std::size_t start) {
    if (looking_at("\"\"\"")) {
      const auto close = text_.find("\"\"\"", pos_ + 3);
      if (close == std::string_view::npos) unterminated(start);
      pos_ = close + 3;
      return;
    }
    ++pos_;
    while (true) {
      if (at_end()) unterminated(start);
      const char c = text_[pos_++];
      if (c == '\\') {
        ++pos_;
      } else if (c == '"') {
        return;
      }
    }
  }

  // pos_ at an opening bracket; skips through its partner.
  void skip_balanced(std::size_t start) {
    std::vector<char> closers;
    do {
      skip_trivia();
      if (at_end()) unterminated(start);
      const char c = peek();
      if (c == '"') {
        skip_string(start);
        continue;
      }
      ++pos_;
      if (c == '[') {
        closers.push_back(']');
      } else if (c == '<') {
        closers.push_back('>');
      } else if (c == '(') {
        closers.push_back(')');
      } else if (c == ']' || c == '>' || c == ')') {
        auto it = std::find(closers.rbegin(), closers.rend(), c);
        if (it != closers.rend()) closers.erase(std::next(it).base(), closers.end());
      }
    } while (!closers.empty());
  }

  bool at_terminator() const noexcept {
    if (peek() != '.') return false;
    const char next = peek(1);
    return next == '\0' || is_space(next) || next == ';' || next == '#';
  }

  bool at_definition_operator() const noexcept {
    return looking_at(":=") || looking_at(":+") || looking_at(":<");
  }

  std::string_view read_identifier() noexcept {
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(peek())) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Skips to just past the next top-level '.' terminator (or end of input).
  void skip_statement() {
    const std::size_t start = pos_;
    while (true) {
      skip_trivia();
      if (at_end()) return;
      const char c = peek();
      if (at_terminator()) {
        ++pos_;
        return;
      }
      if (c == '"') {
        skip_string(start);
      } else if (c == '[' || c == '<' || c == '(') {
        skip_balanced(start);
      } else {
        ++pos_;
      }
    }
  }

  void read_definition(std::size_t start) {
    const std::string name{read_identifier()};
    skip_trivia();
    if (!at_definition_operator()) {
      warn(start, "expected ':=' after '" + name + "'");
      skip_statement();
      return;
    }
    pos_ += 2;

    std::vector<std::string> supertypes;
    while (true) {
      skip_trivia();
      if (at_end()) unterminated(start);
      const char c = peek();
      if (at_terminator()) {
        ++pos_;
        break;
      }
      if (c == '&' || c == ',') {
        ++pos_;
      } else if (c == '"') {
        skip_string(start);
      } else if (c == '[' || c == '<' || c == '(') {
        skip_balanced(start);
      } else if (c == '%' || c == '#' || c == '\'' || c == '^') {
        ++pos_;  // affix keyword, coreference tag, quoted symbol
        read_identifier();
      } else if (is_ident_char(c)) {
        const std::string_view id = read_identifier();
        const std::size_t after = pos_;
        skip_trivia();
        if (at_definition_operator()) unterminated(start);
        pos_ = after;
        supertypes.emplace_back(id);
      } else {
        ++pos_;
      }
    }
    builder_.add_definition(name, supertypes, role_, file_, line_of(start));
  }

  std::string_view text_;
  SourceRole role_;
  std::string_view file_;
  TypeHierarchy::Builder& builder_;
  std::vector<std::size_t> newlines_;
  std::size_t pos_ = 0;
};

bool default_lexicon_name(const std::filesystem::path& p) {
  const std::string stem = p.stem().string();
  return stem == "lexicon" || stem.rfind("lexicon-", 0) == 0 || stem.rfind("lexicon_", 0) == 0 ||
         stem == "gle" || stem == "ple" || stem == "gle-gen";
}

}  // namespace

void load_tdl_text(TypeHierarchy::Builder& builder, std::string_view text, SourceRole role,
                   std::string_view source_name) {
  TdlReader(text, role, source_name, builder).run();
}

TypeHierarchy parse_tdl_text(std::string_view text, SourceRole role,
                             std::string_view source_name) {
  TypeHierarchy::Builder builder;
  builder.mix_checksum(text);
  load_tdl_text(builder, text, role, source_name);
  return std::move(builder).build();
}

TypeHierarchy parse_tdl(std::span<const TdlSource> files) {
  TypeHierarchy::Builder builder;
  for (const auto& source : files) {
    std::ifstream in(source.path, std::ios::binary);
    if (!in) {
      SourceLocation where;
      where.file = source.path.string();
      throw Error(ErrorCode::kIo, "cannot open grammar file", where);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    builder.mix_checksum(source.path.filename().string());
    builder.mix_checksum(source.role == SourceRole::kLexicon ? "L" : "G");
    builder.mix_checksum(text);
    load_tdl_text(builder, text, source.role, source.path.string());
  }
  return std::move(builder).build();
}

std::vector<TdlSource> discover_tdl_sources(std::span<const std::filesystem::path> paths,
                                            std::span<const std::string> lexicon_names) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& path : paths) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::recursive_directory_iterator(path, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".tdl") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(path, ec)) {
      files.push_back(path);
    } else {
      SourceLocation where;
      where.file = path.string();
      throw Error(ErrorCode::kIo, "grammar path does not exist", where);
    }
  }

  std::vector<TdlSource> out;
  for (const auto& f : files) {
    if (std::any_of(out.begin(), out.end(), [&](const TdlSource& s) { return s.path == f; })) {
      continue;
    }
    bool lexicon = false;
    if (lexicon_names.empty()) {
      lexicon = default_lexicon_name(f);
    } else {
      const std::string fname = f.filename().string();
      const std::string stem = f.stem().string();
      lexicon = std::any_of(lexicon_names.begin(), lexicon_names.end(),
                            [&](const std::string& n) { return n == fname || n == stem; });
    }
    out.push_back({f, lexicon ? SourceRole::kLexicon : SourceRole::kGrammar});
  }
  return out;
}

}  // namespace gramprof
