#include "gramprof/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "gramprof/error.hpp"

namespace gramprof {
namespace {

bool ends_with(std::string_view s, std::string_view suffix) noexcept {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::set<std::string> kNoIdentifiers;

}  // namespace

// ---------------------------------------------------------------- Builder --

void TypeHierarchy::Builder::add_definition(std::string_view name,
                                            std::span<const std::string> supertypes,
                                            SourceRole role, std::string_view file,
                                            std::size_t line) {
  auto it = defs_.find(name);
  if (it == defs_.end()) {
    Pending p;
    p.role = role;
    p.file = std::string(file);
    p.line = line;
    it = defs_.emplace(std::string(name), std::move(p)).first;
  } else if (role == SourceRole::kLexicon) {
    it->second.role = SourceRole::kLexicon;
  }
  it->second.parents.insert(supertypes.begin(), supertypes.end());
}

void TypeHierarchy::Builder::add_warning(HierarchyWarning warning) {
  warnings_.push_back(std::move(warning));
}

void TypeHierarchy::Builder::mix_checksum(std::string_view bytes) noexcept {
  for (unsigned char c : bytes) {
    checksum_ ^= c;
    checksum_ *= 0x100000001b3ULL;
  }
}

TypeHierarchy TypeHierarchy::Builder::build() && {
  TypeHierarchy h;
  h.warnings_ = std::move(warnings_);
  h.checksum_ = checksum_;

  for (auto& [name, pending] : defs_) {
    Node n;
    n.parents = pending.parents;
    n.role = pending.role;
    h.nodes_.emplace(name, std::move(n));
  }
  for (const auto& [name, pending] : defs_) {
    for (const auto& parent : pending.parents) {
      if (!h.nodes_.contains(parent)) {
        h.warnings_.push_back(
            {pending.file, pending.line, "undefined supertype '" + parent + "' of '" + name + "'"});
        h.nodes_.emplace(parent, Node{});
      }
    }
  }
  for (auto& [name, node] : h.nodes_) {
    for (const auto& parent : node.parents) h.nodes_.find(parent)->second.children.insert(name);
  }

  // Cycle check: iterative DFS over supertype edges.
  enum class Mark : std::uint8_t { kNew, kActive, kDone };
  std::map<std::string_view, Mark> mark;
  for (const auto& [name, node] : h.nodes_) mark.emplace(name, Mark::kNew);
  for (const auto& [root, root_node] : h.nodes_) {
    if (mark[root] != Mark::kNew) continue;
    struct Frame {
      std::string_view name;
      std::set<std::string>::const_iterator next;
      std::set<std::string>::const_iterator end;
    };
    std::vector<Frame> stack;
    stack.push_back({root, root_node.parents.begin(), root_node.parents.end()});
    mark[root] = Mark::kActive;
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == top.end) {
        mark[top.name] = Mark::kDone;
        stack.pop_back();
        continue;
      }
      const std::string& parent = *top.next++;
      const Mark m = mark[parent];
      if (m == Mark::kActive) {
        std::string path;
        auto it = std::find_if(stack.begin(), stack.end(),
                               [&](const Frame& f) { return f.name == parent; });
        for (; it != stack.end(); ++it) {
          path += std::string(it->name) + " -> ";
        }
        path += parent;
        throw Error(ErrorCode::kCycleDetected, "supertype cycle: " + path);
      }
      if (m == Mark::kNew) {
        mark[parent] = Mark::kActive;
        const Node& pn = h.nodes_.find(parent)->second;
        stack.push_back({parent, pn.parents.begin(), pn.parents.end()});
      }
    }
  }

  for (auto& [name, node] : h.nodes_) node.category = classify(name, h);
  return h;
}

// ----------------------------------------------------------- TypeHierarchy --

const TypeHierarchy::Node& TypeHierarchy::node(std::string_view id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error(ErrorCode::kUnknownIdentifier, "'" + std::string(id) + "' is not in the hierarchy");
  }
  return it->second;
}

bool TypeHierarchy::contains(std::string_view id) const noexcept { return nodes_.contains(id); }

const std::set<std::string>& TypeHierarchy::parents(std::string_view id) const {
  return node(id).parents;
}

const std::set<std::string>& TypeHierarchy::children(std::string_view id) const {
  return node(id).children;
}

SourceRole TypeHierarchy::role(std::string_view id) const { return node(id).role; }

Category TypeHierarchy::category(std::string_view id) const { return node(id).category; }

std::optional<std::string> TypeHierarchy::lexical_type_of(std::string_view id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return std::nullopt;
  std::set<std::string_view> visited;
  std::set<std::string_view> level(it->second.parents.begin(), it->second.parents.end());
  while (!level.empty()) {
    for (std::string_view p : level) {
      if (nodes_.find(p)->second.category == Category::kLexicalType) return std::string(p);
    }
    std::set<std::string_view> next;
    for (std::string_view p : level) {
      visited.insert(p);
      for (const auto& gp : nodes_.find(p)->second.parents) {
        if (!visited.contains(gp)) next.insert(gp);
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

std::vector<std::string> TypeHierarchy::identifiers() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& [name, n] : nodes_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------- classification --

Category classify_by_suffix(std::string_view label) noexcept {
  if (ends_with(label, "_c")) return Category::kConstruction;
  if (ends_with(label, "_dlr") || ends_with(label, "_odlr") || ends_with(label, "_olr") ||
      ends_with(label, "_ilr")) {
    return Category::kLexicalRule;
  }
  if (ends_with(label, "_le")) return Category::kLexicalType;
  return Category::kUnknown;
}

bool looks_like_lexical_entry(std::string_view label) noexcept {
  // <stem>_<pos letters><digits>, e.g. law_n2, sleep_v1, risk_n3
  std::size_t i = label.size();
  std::size_t digits = 0;
  while (i > 0 && std::isdigit(static_cast<unsigned char>(label[i - 1]))) {
    --i;
    ++digits;
  }
  if (digits == 0) return false;
  std::size_t letters = 0;
  while (i > 0 && std::islower(static_cast<unsigned char>(label[i - 1]))) {
    --i;
    ++letters;
  }
  if (letters == 0 || i < 2 || label[i - 1] != '_') return false;
  return true;
}

Category classify_by_ancestry(std::string_view label, const TypeHierarchy& h) {
  auto it = h.nodes_.find(label);
  if (it == h.nodes_.end()) return Category::kUnknown;
  const bool lexicon = it->second.role == SourceRole::kLexicon;
  std::set<std::string_view> visited;
  std::set<std::string_view> level(it->second.parents.begin(), it->second.parents.end());
  while (!level.empty()) {
    for (std::string_view p : level) {
      switch (classify_by_suffix(p)) {
        case Category::kConstruction: return Category::kConstruction;
        case Category::kLexicalRule: return Category::kLexicalRule;
        case Category::kLexicalType:
          return lexicon ? Category::kLexicalEntry : Category::kLexicalType;
        default: break;
      }
    }
    std::set<std::string_view> next;
    for (std::string_view p : level) {
      visited.insert(p);
      for (const auto& gp : h.nodes_.find(p)->second.parents) {
        if (!visited.contains(gp)) next.insert(gp);
      }
    }
    level = std::move(next);
  }
  return Category::kUnknown;
}

Category classify(std::string_view label, const TypeHierarchy& h) {
  if (Category c = classify_by_suffix(label); c != Category::kUnknown) return c;

  const bool known = h.contains(label);
  if (known && h.children(label).empty()) {
    if (h.role(label) == SourceRole::kLexicon) return Category::kLexicalEntry;
    for (const auto& p : h.parents(label)) {
      if (classify_by_suffix(p) == Category::kLexicalType) return Category::kLexicalEntry;
    }
  }
  if ((!known || h.children(label).empty()) && looks_like_lexical_entry(label)) {
    return Category::kLexicalEntry;
  }
  if (known) return classify_by_ancestry(label, h);
  return Category::kUnknown;
}

bool subsumes(std::string_view ancestor, std::string_view descendant, const TypeHierarchy& h) {
  if (!h.contains(ancestor)) {
    throw Error(ErrorCode::kUnknownIdentifier,
                "'" + std::string(ancestor) + "' is not in the hierarchy");
  }
  if (!h.contains(descendant)) {
    throw Error(ErrorCode::kUnknownIdentifier,
                "'" + std::string(descendant) + "' is not in the hierarchy");
  }
  if (ancestor == descendant) return true;
  std::set<std::string_view> visited;
  std::vector<std::string_view> todo{descendant};
  while (!todo.empty()) {
    const std::string_view cur = todo.back();
    todo.pop_back();
    for (const auto& p : h.parents(cur)) {
      if (p == ancestor) return true;
      if (visited.insert(p).second) todo.push_back(p);
    }
  }
  return false;
}

std::size_t CategoryTally::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

CategoryTally tally_categories(const std::set<std::string, std::less<>>& labels,
                               const TypeHierarchy& h) {
  CategoryTally tally;
  for (const auto& label : labels) ++tally.counts[static_cast<std::size_t>(classify(label, h))];
  return tally;
}

std::vector<ClassificationDisagreement> audit_classification(const TypeHierarchy& h) {
  std::vector<ClassificationDisagreement> out;
  for (const auto& id : h.identifiers()) {
    const Category by_suffix = classify_by_suffix(id);
    if (by_suffix == Category::kUnknown) continue;
    const Category by_ancestry = classify_by_ancestry(id, h);
    if (by_ancestry == Category::kUnknown || by_ancestry == by_suffix) continue;
    out.push_back({id, by_suffix, by_ancestry});
  }
  return out;
}

}  // namespace gramprof
