#include "gramprof/category.hpp"

#include <string>

namespace gramprof {

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::kConstruction: return "construction";
    case Category::kLexicalRule: return "lexrule";
    case Category::kLexicalType: return "lextype";
    case Category::kLexicalEntry: return "lexentry";
    case Category::kUnknown: return "unknown";
    case Category::kAll: return "all";
  }
  return "unknown";
}

std::optional<Category> parse_category(std::string_view name) noexcept {
  std::string lower;
  lower.reserve(name.size());
  for (char ch : name) {
    lower.push_back(ch == '_' ? '-' : static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch - 'A' + 'a' : ch));
  }
  if (lower == "construction" || lower == "constructions" || lower == "syntactic" ||
      lower == "syntax") {
    return Category::kConstruction;
  }
  if (lower == "lexrule" || lower == "lexrules" || lower == "lexical-rule" ||
      lower == "lexical-rules" || lower == "morphological") {
    return Category::kLexicalRule;
  }
  if (lower == "lextype" || lower == "lextypes" || lower == "lexical-type" ||
      lower == "lexical-types") {
    return Category::kLexicalType;
  }
  if (lower == "lexentry" || lower == "lexentries" || lower == "lexical-entry" ||
      lower == "lexical-entries") {
    return Category::kLexicalEntry;
  }
  if (lower == "unknown") return Category::kUnknown;
  if (lower == "all") return Category::kAll;
  return std::nullopt;
}

}  // namespace gramprof
