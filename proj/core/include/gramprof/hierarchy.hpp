#pragma once

// Grammar type hierarchy loaded from TDL definition files, and the mapping
// of derivation labels onto grammar-entity categories.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gramprof/category.hpp"

namespace gramprof {

// Lexicon files hold lexical entries (instances); everything else is grammar.
enum class SourceRole : std::uint8_t { kGrammar, kLexicon };

struct TdlSource {
  std::filesystem::path path;
  SourceRole role = SourceRole::kGrammar;
};

struct HierarchyWarning {
  std::string file;
  std::size_t line = 0;
  std::string message;
};

class TypeHierarchy {
 public:
  // Accumulates definitions; build() resolves forward references, rejects
  // cycles and classifies every node. Repeated definitions of one
  // identifier merge their supertype sets.
  class Builder {
   public:
    void add_definition(std::string_view name, std::span<const std::string> supertypes,
                        SourceRole role = SourceRole::kGrammar, std::string_view file = {},
                        std::size_t line = 0);
    void add_warning(HierarchyWarning warning);
    void mix_checksum(std::string_view bytes) noexcept;
    TypeHierarchy build() &&;

   private:
    struct Pending {
      std::set<std::string> parents;
      SourceRole role = SourceRole::kGrammar;
      std::string file;
      std::size_t line = 0;
    };
    std::map<std::string, Pending, std::less<>> defs_;
    std::vector<HierarchyWarning> warnings_;
    std::uint64_t checksum_ = 0xcbf29ce484222325ULL;
  };

  TypeHierarchy() = default;

  bool contains(std::string_view id) const noexcept;
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  // Direct supertypes / subtypes. Throw Error(kUnknownIdentifier).
  const std::set<std::string>& parents(std::string_view id) const;
  const std::set<std::string>& children(std::string_view id) const;
  SourceRole role(std::string_view id) const;

  // Category assigned at build time (total over nodes).
  Category category(std::string_view id) const;

  // The lexical type an entry instantiates: the lexicographically first direct
  // supertype classified as a lexical type, else the nearest such ancestor.
  std::optional<std::string> lexical_type_of(std::string_view id) const;

  // All identifiers in lexicographic order.
  std::vector<std::string> identifiers() const;

  const std::vector<HierarchyWarning>& warnings() const noexcept { return warnings_; }

  // FNV-1a 64 over the loaded file contents; identifies the grammar version.
  std::uint64_t checksum() const noexcept { return checksum_; }

 private:
  struct Node {
    std::set<std::string> parents;
    std::set<std::string> children;
    SourceRole role = SourceRole::kGrammar;
    Category category = Category::kUnknown;
  };
  const Node& node(std::string_view id) const;

  std::map<std::string, Node, std::less<>> nodes_;
  std::vector<HierarchyWarning> warnings_;
  std::uint64_t checksum_ = 0;

  friend class Builder;
  friend Category classify_by_ancestry(std::string_view, const TypeHierarchy&);
};

// Reads TDL type/instance definitions. Only identifiers and their supertype
// conjuncts are interpreted; feature-structure bodies, affix declarations,
// letter sets and directives are skipped. Throws Error with kIo,
// kUnterminatedDefinition or kCycleDetected. Undefined supertypes become
// warnings and are added as parentless nodes.
TypeHierarchy parse_tdl(std::span<const TdlSource> files);

// Single in-memory TDL text, used by tests and tools.
TypeHierarchy parse_tdl_text(std::string_view text, SourceRole role = SourceRole::kGrammar,
                             std::string_view source_name = "<memory>");

// Adds the definitions in `text` to an existing builder.
void load_tdl_text(TypeHierarchy::Builder& builder, std::string_view text, SourceRole role,
                   std::string_view source_name);

// Collects *.tdl under each path (directories recursively, sorted). A file is
// a lexicon file when its name matches one of `lexicon_names` (exact file
// names or stems); the default set covers the ERG layout.
std::vector<TdlSource> discover_tdl_sources(std::span<const std::filesystem::path> paths,
                                            std::span<const std::string> lexicon_names = {});

// Naming-convention classification only: _c, _dlr/_odlr/_olr/_ilr, _le. Returns
// kUnknown when no suffix applies.
Category classify_by_suffix(std::string_view label) noexcept;

// True for conventional lexical-entry names such as law_n2 or sleep_v1.
bool looks_like_lexical_entry(std::string_view label) noexcept;

// Category derived purely from the hierarchy: the suffix category of the
// nearest classified strict ancestor (breadth-first, ties broken by name).
// A lexical-type ancestor makes lexicon-file nodes entries and anything
// else a lexical type. kUnknown when nothing applies.
Category classify_by_ancestry(std::string_view label, const TypeHierarchy& h);

// Full classification: suffix, then lexicon identity, then ancestry.
Category classify(std::string_view label, const TypeHierarchy& h);

// Reflexive reachability over supertype edges. Throws Error(kUnknownIdentifier).
bool subsumes(std::string_view ancestor, std::string_view descendant, const TypeHierarchy& h);

struct CategoryTally {
  std::array<std::size_t, 5> counts{};  // indexed by Category (kUnknown included)

  std::size_t operator[](Category c) const noexcept {
    return c == Category::kAll ? total() : counts[static_cast<std::size_t>(c)];
  }
  std::size_t total() const noexcept;
};

CategoryTally tally_categories(const std::set<std::string, std::less<>>& labels,
                               const TypeHierarchy& h);

struct ClassificationDisagreement {
  std::string identifier;
  Category by_suffix = Category::kUnknown;
  Category by_ancestry = Category::kUnknown;
};

// Every node where suffix and ancestry classification both apply but differ.
std::vector<ClassificationDisagreement> audit_classification(const TypeHierarchy& h);

}  // namespace gramprof
