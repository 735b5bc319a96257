#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gramprof {

// Grammar-entity categories. kAll is only meaningful as a profile filter;
// classification never yields it.
enum class Category : std::uint8_t {
  kConstruction = 0,
  kLexicalRule = 1,
  kLexicalType = 2,
  kLexicalEntry = 3,
  kUnknown = 4,
  kAll = 5,
};

inline constexpr std::array<Category, 4> kCoreCategories{
    Category::kConstruction, Category::kLexicalRule, Category::kLexicalType,
    Category::kLexicalEntry};

// Short machine names: construction, lexrule, lextype, lexentry, unknown, all.
std::string_view to_string(Category c) noexcept;

// Accepts the short names plus a few aliases ("syntactic", "lexical-rule", ...).
std::optional<Category> parse_category(std::string_view name) noexcept;

}  // namespace gramprof
