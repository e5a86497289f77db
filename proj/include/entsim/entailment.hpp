#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "entsim/errors.hpp"
#include "entsim/regions.hpp"

namespace entsim {

/// Closed predicate vocabulary. There is deliberately no `equal` or
/// `disjoint`: those relations never enter a comparison set.
enum class Predicate { touches, within, contains };

inline std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::touches: return "touches";
    case Predicate::within: return "within";
    case Predicate::contains: return "contains";
  }
  return "";
}

inline Predicate inverse(Predicate p) {
  switch (p) {
    case Predicate::touches: return Predicate::touches;
    case Predicate::within: return Predicate::contains;
    case Predicate::contains: return Predicate::within;
  }
  return p;
}

/// Atomic <subject, predicate, object> triple over region ids.
class Statement {
 public:
  Statement(std::string subject, Predicate predicate, std::string object)
      : subject_(std::move(subject)), predicate_(predicate), object_(std::move(object)) {
    if (subject_ == object_)
      throw InputDomainError("statement subject equals object: '" + subject_ + "'");
    canonical_.reserve(subject_.size() + object_.size() + 10);
    canonical_.append(subject_).append(1, '|').append(to_string(predicate_))
        .append(1, '|').append(object_);
  }

  const std::string& subject() const { return subject_; }
  Predicate predicate() const { return predicate_; }
  const std::string& object() const { return object_; }

  Statement inverted() const { return {object_, inverse(predicate_), subject_}; }

  /// `subject|predicate|object`
  const std::string& canonical() const { return canonical_; }

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.canonical_ == b.canonical_;
  }
  friend auto operator<=>(const Statement& a, const Statement& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  std::string subject_;
  Predicate predicate_;
  std::string object_;
  std::string canonical_;
};

inline std::string canonical_form(const Statement& st) { return st.canonical(); }

/// Set of statements keyed on canonical form; iteration is in canonical
/// (byte-lexicographic) order.
class StatementSet {
 public:
  using const_iterator = std::set<Statement>::const_iterator;

  StatementSet() = default;
  StatementSet(std::initializer_list<Statement> init) : items_(init) {}

  bool insert(Statement st) { return items_.insert(std::move(st)).second; }
  void merge(const StatementSet& other) { items_.insert(other.begin(), other.end()); }

  bool contains(const Statement& st) const { return items_.count(st) > 0; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }

  /// |this ∩ other|, by a linear merge over the sorted sets.
  std::size_t intersection_size(const StatementSet& other) const {
    std::size_t n = 0;
    auto a = items_.begin();
    auto b = other.items_.begin();
    while (a != items_.end() && b != other.items_.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++n;
        ++a;
        ++b;
      }
    }
    return n;
  }

  friend bool operator==(const StatementSet&, const StatementSet&) = default;

 private:
  std::set<Statement> items_;
};

enum class Rule { neighbor_touches, inverse_statements, containment_transitivity };

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::neighbor_touches: return "neighbor_touches";
    case Rule::inverse_statements: return "inverse_statements";
    case Rule::containment_transitivity: return "containment_transitivity";
  }
  return "";
}

inline Rule parse_rule(std::string_view name) {
  for (Rule r : {Rule::neighbor_touches, Rule::inverse_statements,
                 Rule::containment_transitivity})
    if (to_string(r) == name) return r;
  throw SchemaError("unknown rule '" + std::string(name) + "'");
}

/// Terminology and entailment regime: which rules run, how adjacency is
/// derived, and the child -> parent containment hierarchy.
struct TBoxConfig {
  std::set<Rule> rules{Rule::neighbor_touches, Rule::inverse_statements};
  bool corner_touch = true;
  std::map<std::string, std::string> hierarchy;

  bool enabled(Rule r) const { return rules.count(r) > 0; }

  /// Ancestors of `region`, nearest first.
  std::vector<std::string> ancestors(const std::string& region) const {
    std::vector<std::string> chain;
    auto it = hierarchy.find(region);
    while (it != hierarchy.end()) {
      if (std::find(chain.begin(), chain.end(), it->second) != chain.end() ||
          it->second == region)
        throw SchemaError("hierarchy contains a cycle through '" + it->second + "'");
      chain.push_back(it->second);
      it = hierarchy.find(it->second);
    }
    return chain;
  }

  /// Adds the layer's `parent_id` links. A region given different parents
  /// by the two sources is a schema error.
  void merge_hierarchy(const std::map<std::string, std::string>& extra) {
    for (const auto& [child, parent] : extra) {
      auto [it, inserted] = hierarchy.emplace(child, parent);
      if (!inserted && it->second != parent)
        throw SchemaError("conflicting parents for '" + child + "': '" + it->second +
                          "' vs '" + parent + "'");
    }
    detail::check_acyclic(hierarchy);
  }

  void validate() const {
    detail::check_acyclic(hierarchy);
    if (enabled(Rule::containment_transitivity) && hierarchy.empty())
      throw SchemaError("containment_transitivity requires a hierarchy");
  }
};

inline TBoxConfig load_tbox(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("TBox config must be a JSON object");
  TBoxConfig cfg;
  if (doc.contains("rules")) {
    if (!doc["rules"].is_array()) throw SchemaError("TBox 'rules' must be a list");
    cfg.rules.clear();
    for (const auto& r : doc["rules"]) {
      if (!r.is_string()) throw SchemaError("TBox rule names must be strings");
      cfg.rules.insert(parse_rule(r.get<std::string>()));
    }
  }
  if (doc.contains("corner_touch")) {
    if (!doc["corner_touch"].is_boolean())
      throw SchemaError("TBox 'corner_touch' must be a boolean");
    cfg.corner_touch = doc["corner_touch"].get<bool>();
  }
  if (doc.contains("hierarchy")) {
    if (!doc["hierarchy"].is_array()) throw SchemaError("TBox 'hierarchy' must be a list");
    for (const auto& e : doc["hierarchy"]) {
      if (!e.is_object() || !e.contains("child") || !e.contains("parent") ||
          !e["child"].is_string() || !e["parent"].is_string())
        throw SchemaError("hierarchy entries must be {child, parent} string records");
      const auto child = e["child"].get<std::string>();
      const auto parent = e["parent"].get<std::string>();
      detail::check_region_id(child, "hierarchy");
      detail::check_region_id(parent, "hierarchy");
      if (child == parent) throw SchemaError("hierarchy self-edge on '" + child + "'");
      auto [it, inserted] = cfg.hierarchy.emplace(child, parent);
      if (!inserted && it->second != parent)
        throw SchemaError("hierarchy gives '" + child + "' two parents");
    }
  }
  detail::check_acyclic(cfg.hierarchy);
  return cfg;
}

inline TBoxConfig load_tbox(std::istream& in) {
  try {
    return load_tbox(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("TBox config is not valid JSON: ") + e.what());
  }
}

/// Statements entailed by a fix located in `region`. The fix-level
/// <fix, within, region> assertion triggers these rules but is not itself
/// part of the result, since fix identifiers never match across
/// trajectories.
inline StatementSet entail_fix(const std::string& region, const AdjacencyGraph& adjacency,
                               const TBoxConfig& tbox) {
  if (!adjacency.contains(region))
    throw InputDomainError("unknown region id '" + region + "'");
  StatementSet out;
  const bool with_inverse = tbox.enabled(Rule::inverse_statements);
  auto emit = [&](Statement st) {
    if (with_inverse) out.insert(st.inverted());
    out.insert(std::move(st));
  };
  if (tbox.enabled(Rule::neighbor_touches))
    for (const auto& n : adjacency.neighbors(region)) emit({region, Predicate::touches, n});
  if (tbox.enabled(Rule::containment_transitivity))
    for (const auto& p : tbox.ancestors(region)) emit({region, Predicate::within, p});
  return out;
}

/// Union of entail_fix over the distinct regions `t` crosses; fixes
/// outside the layer contribute nothing.
inline StatementSet entail_regions(const std::set<std::string>& regions,
                                   const AdjacencyGraph& adjacency, const TBoxConfig& tbox) {
  StatementSet out;
  for (const auto& r : regions) out.merge(entail_fix(r, adjacency, tbox));
  return out;
}

inline StatementSet entail_trajectory(const Trajectory& t, const RegionLayer& layer,
                                      const AdjacencyGraph& adjacency, const TBoxConfig& tbox,
                                      double eps = kDefaultEps) {
  return entail_regions(crossed_regions(t, layer, eps).regions, adjacency, tbox);
}

/// Newline-delimited canonical triples in sorted order.
inline void write_statements(std::ostream& out, const StatementSet& set) {
  for (const auto& st : set) out << st.canonical() << '\n';
}

}  // namespace entsim
