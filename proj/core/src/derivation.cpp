#include "gramprof/derivation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "gramprof/error.hpp"

namespace gramprof {
namespace {

constexpr int kMaxDepth = 10000;

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_atom_char(char c) noexcept {
  return !is_space(c) && c != '(' && c != ')' && c != '"';
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

class DerivationReader {
 public:
  explicit DerivationReader(std::string_view text) : text_(text) {}

  DerivationNode read_root() {
    skip_ws();
    if (at_end()) fail(ErrorCode::kEmptyInput, "no derivation in input", 0);
    if (peek() != '(') fail(ErrorCode::kMalformedNode, "derivation must start with '('", pos_);
    const std::size_t open = pos_++;
    skip_ws();
    if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", open);
    if (peek() == '"') fail(ErrorCode::kMalformedNode, "derivation root cannot be a terminal", pos_);

    const std::size_t head_pos = pos_;
    const std::string_view head = read_atom();
    DerivationNode root;
    if (parse_number<std::int64_t>(head)) {
      root = read_node_body(open, head, head_pos, 1);
    } else if (head.empty()) {
      fail(ErrorCode::kMalformedNode, "missing node id", head_pos);
    } else {
      // root-condition wrapper: (root_strict (1 ...))
      skip_ws();
      if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", open);
      if (peek() != '(') fail(ErrorCode::kMalformedNode, "root condition must wrap a node", pos_);
      const std::size_t inner_open = pos_++;
      skip_ws();
      if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", inner_open);
      const std::size_t id_pos = pos_;
      const std::string_view id = read_atom();
      if (!parse_number<std::int64_t>(id)) fail(ErrorCode::kMalformedNode, "missing node id", id_pos);
      root = read_node_body(inner_open, id, id_pos, 2);
      skip_ws();
      if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", open);
      if (peek() != ')') {
        fail(ErrorCode::kMalformedNode, "root condition must wrap exactly one node", pos_);
      }
      ++pos_;
    }

    skip_ws();
    if (!at_end()) {
      if (peek() == ')') fail(ErrorCode::kUnbalancedParens, "unexpected ')'", pos_);
      fail(ErrorCode::kMalformedNode, "trailing content after derivation", pos_);
    }
    return root;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& message, std::size_t at) const {
    SourceLocation where;
    where.offset = at;
    throw Error(code, message, where);
  }

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek() const noexcept { return text_[pos_]; }

  void skip_ws() noexcept {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  std::string_view read_atom() noexcept {
    const std::size_t start = pos_;
    while (!at_end() && is_atom_char(peek())) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string read_quoted() {
    const std::size_t start = pos_++;
    std::string out;
    while (true) {
      if (at_end()) fail(ErrorCode::kMalformedNode, "unterminated string", start);
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end()) fail(ErrorCode::kMalformedNode, "unterminated string", start);
        out.push_back(text_[pos_++]);
      } else {
        out.push_back(c);
      }
    }
  }

  // Skips token details trailing a surface string, up to the matching ')'.
  void skip_group_rest(std::size_t open) {
    int depth = 1;
    while (true) {
      if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", open);
      const char c = peek();
      if (c == '"') {
        read_quoted();
        continue;
      }
      ++pos_;
      if (c == '(') {
        ++depth;
      } else if (c == ')' && --depth == 0) {
        return;
      }
    }
  }

  // Called with pos_ just past the node id.
  DerivationNode read_node_body(std::size_t open, std::string_view id_token, std::size_t id_pos,
                                int depth) {
    if (depth > kMaxDepth) fail(ErrorCode::kMalformedNode, "derivation nested too deeply", open);
    DerivationNode node;
    node.node_id = *parse_number<std::int64_t>(id_token);
    if (node.node_id < 0) fail(ErrorCode::kMalformedNode, "negative node id", id_pos);

    skip_ws();
    if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", open);
    const std::size_t label_pos = pos_;
    if (peek() == '"') {
      node.label = read_quoted();
    } else {
      node.label = std::string(read_atom());
    }
    if (node.label.empty()) fail(ErrorCode::kMalformedNode, "missing label", label_pos);

    std::string_view fields[3];
    std::size_t field_pos[3] = {0, 0, 0};
    int nfields = 0;
    while (true) {
      skip_ws();
      if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", open);
      if (peek() == '(' || peek() == ')') break;
      if (peek() == '"') fail(ErrorCode::kMalformedNode, "unexpected string in node header", pos_);
      if (nfields == 3) fail(ErrorCode::kMalformedNode, "too many fields in node header", pos_);
      field_pos[nfields] = pos_;
      fields[nfields++] = read_atom();
    }
    if (nfields < 2) fail(ErrorCode::kMalformedNode, "missing span", label_pos);
    const int span_at = nfields - 2;
    if (nfields == 3) {
      auto score = parse_number<double>(fields[0]);
      if (!score) fail(ErrorCode::kMalformedNode, "score is not a number", field_pos[0]);
      node.score = *score;
    }
    auto start = parse_number<std::int64_t>(fields[span_at]);
    auto end = parse_number<std::int64_t>(fields[span_at + 1]);
    if (!start || *start < 0) {
      fail(ErrorCode::kMalformedNode, "span start is not a token index", field_pos[span_at]);
    }
    if (!end || *end < *start) {
      fail(ErrorCode::kMalformedNode, "span end is not a token index >= start",
           field_pos[span_at + 1]);
    }
    node.span_start = *start;
    node.span_end = *end;

    while (true) {
      skip_ws();
      if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", open);
      if (peek() == ')') {
        ++pos_;
        break;
      }
      const std::size_t child_open = pos_++;  // peek() == '('
      skip_ws();
      if (at_end()) fail(ErrorCode::kUnbalancedParens, "unclosed '('", child_open);
      if (peek() == '"') {
        if (node.surface || !node.daughters.empty()) {
          fail(ErrorCode::kMalformedNode, "a terminal must be the only daughter", child_open);
        }
        node.surface = read_quoted();
        skip_group_rest(child_open);
        continue;
      }
      const std::size_t child_id_pos = pos_;
      const std::string_view child_id = read_atom();
      if (!parse_number<std::int64_t>(child_id)) {
        fail(ErrorCode::kMalformedNode, "missing node id", child_id_pos);
      }
      if (node.surface) {
        fail(ErrorCode::kMalformedNode, "a terminal must be the only daughter", child_open);
      }
      DerivationNode child = read_node_body(child_open, child_id, child_id_pos, depth + 1);
      if (child.span_start < node.span_start || child.span_end > node.span_end) {
        fail(ErrorCode::kMalformedNode, "daughter span outside mother span", child_open);
      }
      if (!node.daughters.empty() && node.daughters.back().span_end > child.span_start) {
        fail(ErrorCode::kMalformedNode, "daughter spans overlap or are out of order", child_open);
      }
      node.daughters.push_back(std::move(child));
    }
    if (!node.surface && node.daughters.empty()) {
      fail(ErrorCode::kMalformedNode, "node has neither daughters nor a terminal", open);
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool needs_quoting(std::string_view label) noexcept {
  if (label.empty()) return true;
  return std::any_of(label.begin(), label.end(), [](char c) { return !is_atom_char(c); });
}

void append_quoted(std::string_view s, std::string& out) {
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

void append_double(double v, std::string& out) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void serialize_into(const DerivationNode& node, std::string& out) {
  out.push_back('(');
  out += std::to_string(node.node_id);
  out.push_back(' ');
  if (needs_quoting(node.label)) {
    append_quoted(node.label, out);
  } else {
    out += node.label;
  }
  out.push_back(' ');
  append_double(node.score, out);
  out.push_back(' ');
  out += std::to_string(node.span_start);
  out.push_back(' ');
  out += std::to_string(node.span_end);
  if (node.surface) {
    out += " (";
    append_quoted(*node.surface, out);
    out.push_back(')');
  } else {
    for (const auto& d : node.daughters) {
      out.push_back(' ');
      serialize_into(d, out);
    }
  }
  out.push_back(')');
}

void collect(const DerivationNode& node, std::vector<Occurrence>& out) {
  out.push_back(Occurrence{node.label, Category::kUnknown});
  for (const auto& d : node.daughters) collect(d, out);
}

}  // namespace

DerivationNode parse_derivation(std::string_view text) {
  return DerivationReader(text).read_root();
}

std::string serialize_derivation(const DerivationNode& node) {
  std::string out;
  serialize_into(node, out);
  return out;
}

std::vector<Occurrence> extract_occurrences(const DerivationNode& node) {
  std::vector<Occurrence> out;
  collect(node, out);
  return out;
}

std::size_t count_nodes(const DerivationNode& node) noexcept {
  std::size_t n = 1;
  for (const auto& d : node.daughters) n += count_nodes(d);
  return n;
}

std::size_t count_terminals(const DerivationNode& node) noexcept {
  if (node.is_terminal()) return 1;
  std::size_t n = 0;
  for (const auto& d : node.daughters) n += count_terminals(d);
  return n;
}

}  // namespace gramprof
