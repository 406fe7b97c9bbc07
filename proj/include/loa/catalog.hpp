#pragma once

// Human behavior lookup table: the action alphabet, the subaction schema of
// each action, and recorded human reference traces grouped by scenario.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "loa/error.hpp"
#include "loa/trace.hpp"

namespace loa {

struct SubactionSchema {
  std::string name;
  std::string unit;
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const SubactionSchema&, const SubactionSchema&) = default;
};

struct ActionDef {
  std::string name;
  std::string symbol;
  std::vector<SubactionSchema> subactions;

  const SubactionSchema* find_subaction(std::string_view sub) const {
    for (const auto& s : subactions)
      if (s.name == sub) return &s;
    return nullptr;
  }

  friend bool operator==(const ActionDef&, const ActionDef&) = default;
};

struct ReferenceTrace {
  std::string id;
  std::string scenario;
  std::vector<TraceStep> steps;

  Trace as_trace() const { return Trace{scenario, steps}; }

  friend bool operator==(const ReferenceTrace&, const ReferenceTrace&) = default;
};

/// Result of looking an observed event up in the catalog. Matching is by
/// action identity only; subaction values never cause a rejection.
struct MatchOutcome {
  enum class Kind { Matched, Unknown };

  Kind kind = Kind::Unknown;
  std::string symbol;
  std::size_t symbol_index = 0;
  bool out_of_range = false;      // some value lies outside its schema's [min, max]
  bool unknown_parameter = false; // some parameter is not in the action's schema

  bool matched() const noexcept { return kind == Kind::Matched; }

  static MatchOutcome unknown() { return {}; }
};

class BehaviorCatalog {
 public:
  /// Validates every invariant and throws CatalogError listing all violations.
  static BehaviorCatalog create(std::string version, std::vector<ActionDef> actions,
                                std::vector<ReferenceTrace> references) {
    BehaviorCatalog cat;
    cat.version_ = std::move(version);
    cat.actions_ = std::move(actions);
    cat.references_ = std::move(references);
    std::vector<Violation> violations;
    cat.index_and_validate(violations);
    if (!violations.empty()) throw CatalogError(std::move(violations));
    return cat;
  }

  const std::string& version() const noexcept { return version_; }
  const std::vector<ActionDef>& actions() const noexcept { return actions_; }
  const std::vector<ReferenceTrace>& references() const noexcept { return references_; }
  std::size_t alphabet_size() const noexcept { return actions_.size(); }

  const ActionDef* find_action(std::string_view name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &actions_[it->second];
  }

  const ActionDef* find_by_symbol(std::string_view symbol) const {
    auto idx = symbol_index(symbol);
    return idx ? &actions_[*idx] : nullptr;
  }

  std::optional<std::size_t> symbol_index(std::string_view symbol) const {
    auto it = by_symbol_.find(symbol);
    if (it == by_symbol_.end()) return std::nullopt;
    return it->second;
  }

  bool has_symbol(std::string_view symbol) const { return by_symbol_.contains(symbol); }

  std::vector<const ReferenceTrace*> references_for(std::string_view scenario) const {
    std::vector<const ReferenceTrace*> out;
    for (const auto& r : references_)
      if (r.scenario == scenario) out.push_back(&r);
    return out;
  }

  bool has_scenario(std::string_view scenario) const {
    for (const auto& r : references_)
      if (r.scenario == scenario) return true;
    return false;
  }

  const ReferenceTrace* find_reference(std::string_view id) const {
    for (const auto& r : references_)
      if (r.id == id) return &r;
    return nullptr;
  }

  std::vector<std::string> scenarios() const {
    std::set<std::string> s;
    for (const auto& r : references_) s.insert(r.scenario);
    return {s.begin(), s.end()};
  }

  /// Symbol indices of a trace; nullopt if any symbol is outside the alphabet.
  std::optional<std::vector<std::size_t>> encode_symbols(const std::vector<TraceStep>& steps) const {
    std::vector<std::size_t> out;
    out.reserve(steps.size());
    for (const auto& s : steps) {
      auto idx = symbol_index(s.symbol);
      if (!idx) return std::nullopt;
      out.push_back(*idx);
    }
    return out;
  }

  friend bool operator==(const BehaviorCatalog& a, const BehaviorCatalog& b) {
    return a.version_ == b.version_ && a.actions_ == b.actions_ && a.references_ == b.references_;
  }

 private:
  BehaviorCatalog() = default;

  void index_and_validate(std::vector<Violation>& v) {
    auto add = [&v](ErrorKind k, std::string msg) { v.push_back({k, std::move(msg)}); };

    if (actions_.empty()) add(ErrorKind::InvalidSchema, "catalog defines no actions");

    for (std::size_t i = 0; i < actions_.size(); ++i) {
      const ActionDef& a = actions_[i];
      if (a.name.empty()) add(ErrorKind::InvalidSchema, "action #" + std::to_string(i) + " has an empty name");
      if (!valid_symbol(a.symbol))
        add(ErrorKind::InvalidSchema,
            "action '" + a.name + "' symbol must be a non-empty token without whitespace");

      auto [nit, name_fresh] = by_name_.emplace(a.name, i);
      if (!name_fresh)
        add(ErrorKind::DuplicateActionName, "actions '" + actions_[nit->second].name + "' (#" +
                                                std::to_string(nit->second) + ") and #" +
                                                std::to_string(i) + " share the name '" + a.name + "'");
      auto [sit, sym_fresh] = by_symbol_.emplace(a.symbol, i);
      if (!sym_fresh)
        add(ErrorKind::DuplicateSymbol, "actions '" + actions_[sit->second].name + "' and '" +
                                            a.name + "' share the symbol '" + a.symbol + "'");

      std::set<std::string, std::less<>> seen;
      for (const auto& s : a.subactions) {
        if (s.name.empty())
          add(ErrorKind::InvalidSchema, "action '" + a.name + "' has a subaction with an empty name");
        if (!seen.insert(s.name).second)
          add(ErrorKind::InvalidSchema,
              "action '" + a.name + "' declares subaction '" + s.name + "' twice");
        if (!std::isfinite(s.min) || !std::isfinite(s.max))
          add(ErrorKind::InvalidSchema,
              "subaction '" + a.name + "." + s.name + "' has a non-finite bound");
        else if (s.min > s.max)
          add(ErrorKind::InvalidSchema, "subaction '" + a.name + "." + s.name + "' has min > max");
      }
    }

    std::set<std::string, std::less<>> ids;
    for (const auto& r : references_) {
      const std::string where = "reference '" + r.id + "'";
      if (r.id.empty()) add(ErrorKind::InvalidSchema, "reference with an empty id");
      if (!ids.insert(r.id).second) add(ErrorKind::InvalidSchema, "duplicate reference id '" + r.id + "'");
      if (r.scenario.empty()) add(ErrorKind::InvalidSchema, where + " has an empty scenario");
      if (r.steps.empty()) add(ErrorKind::InvalidSchema, where + " has no steps");

      double last_t = 0.0;
      for (std::size_t k = 0; k < r.steps.size(); ++k) {
        const TraceStep& s = r.steps[k];
        const std::string at = where + " step " + std::to_string(k);
        if (!std::isfinite(s.t) || s.t < 0.0)
          add(ErrorKind::InvalidSchema, at + " has a negative or non-finite timestamp");
        else if (s.t < last_t)
          add(ErrorKind::InvalidSchema, at + " timestamp decreases");
        else
          last_t = s.t;

        const ActionDef* def = find_by_symbol(s.symbol);
        if (def == nullptr) {
          add(ErrorKind::UnresolvedSymbol, at + " uses '" + trim_mark(s.symbol) + "', which is not in the alphabet");
          continue;
        }
        for (const auto& [pname, value] : s.params) {
          const SubactionSchema* schema = def->find_subaction(pname);
          if (schema == nullptr)
            add(ErrorKind::InvalidSchema,
                at + " references unknown subaction '" + def->name + "." + pname + "'");
          else if (!std::isfinite(value))
            add(ErrorKind::InvalidSchema, at + " has a non-finite value for '" + pname + "'");
        }
      }
    }
  }

  static std::string trim_mark(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return std::string(s);
  }

  static bool valid_symbol(std::string_view s) {
    if (s.empty()) return false;
    for (unsigned char c : s)
      if (c <= 0x20 || c == 0x7f) return false;
    return true;
  }

  std::string version_;
  std::vector<ActionDef> actions_;
  std::vector<ReferenceTrace> references_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::map<std::string, std::size_t, std::less<>> by_symbol_;
};

inline std::optional<ActionDef> lookup_action(const BehaviorCatalog& catalog, std::string_view name) {
  const ActionDef* a = catalog.find_action(name);
  if (a == nullptr) return std::nullopt;
  return *a;
}

/// Encodes an observed event as a catalog symbol. Subaction values are not
/// considered for matching; they only raise flags.
inline MatchOutcome encode_event(const BehaviorCatalog& catalog, const ObservationEvent& event) {
  const ActionDef* def = catalog.find_action(event.action);
  if (def == nullptr) return MatchOutcome::unknown();

  MatchOutcome out;
  out.kind = MatchOutcome::Kind::Matched;
  out.symbol = def->symbol;
  out.symbol_index = *catalog.symbol_index(def->symbol);
  for (const auto& [name, value] : event.params) {
    const SubactionSchema* schema = def->find_subaction(name);
    if (schema == nullptr) {
      out.unknown_parameter = true;
    } else if (!(value >= schema->min && value <= schema->max)) {
      out.out_of_range = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Catalog document
// ---------------------------------------------------------------------------

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void malformed(const std::string& msg) {
  throw CatalogError({{ErrorKind::MalformedDocument, msg}});
}

inline const json& require(const json& obj, const char* key, json::value_t type, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(where + ": missing key '" + key + "'");
  const bool ok = type == json::value_t::number_float ? it->is_number() : it->type() == type;
  if (!ok) malformed(where + ": key '" + key + "' has the wrong type");
  return *it;
}

inline double number_of(const json& j) { return j.get<double>(); }

inline const std::string kUnresolvedMark = " ";

}  // namespace detail

/// Parses and validates a catalog document. Reference steps name actions; they
/// are resolved to symbols here.
inline BehaviorCatalog load_catalog(std::istream& source) {
  using detail::json;
  using detail::require;
  using VT = json::value_t;

  json doc = json::parse(source, nullptr, false);
  if (doc.is_discarded()) detail::malformed("catalog is not a valid JSON document");
  if (!doc.is_object()) detail::malformed("catalog root must be an object");

  std::string version = require(doc, "version", VT::string, "catalog").get<std::string>();

  std::vector<ActionDef> actions;
  for (const auto& ja : require(doc, "actions", VT::array, "catalog")) {
    const std::string where = "action #" + std::to_string(actions.size());
    if (!ja.is_object()) detail::malformed(where + " must be an object");
    ActionDef a;
    a.name = require(ja, "name", VT::string, where).get<std::string>();
    a.symbol = require(ja, "symbol", VT::string, where).get<std::string>();
    auto it = ja.find("subactions");
    if (it != ja.end()) {
      if (!it->is_array()) detail::malformed(where + ": key 'subactions' has the wrong type");
      for (const auto& js : *it) {
        const std::string swhere = where + " subaction #" + std::to_string(a.subactions.size());
        if (!js.is_object()) detail::malformed(swhere + " must be an object");
        SubactionSchema s;
        s.name = require(js, "name", VT::string, swhere).get<std::string>();
        s.unit = js.contains("unit") ? require(js, "unit", VT::string, swhere).get<std::string>() : "";
        s.min = detail::number_of(require(js, "min", VT::number_float, swhere));
        s.max = detail::number_of(require(js, "max", VT::number_float, swhere));
        a.subactions.push_back(std::move(s));
      }
    }
    actions.push_back(std::move(a));
  }

  std::map<std::string, std::string, std::less<>> symbol_of;
  for (const auto& a : actions) symbol_of.emplace(a.name, a.symbol);

  std::vector<ReferenceTrace> references;
  if (doc.contains("references")) {
    for (const auto& jr : require(doc, "references", VT::array, "catalog")) {
      const std::string where = "reference #" + std::to_string(references.size());
      if (!jr.is_object()) detail::malformed(where + " must be an object");
      ReferenceTrace r;
      r.id = require(jr, "id", VT::string, where).get<std::string>();
      r.scenario = require(jr, "scenario", VT::string, where).get<std::string>();
      for (const auto& js : require(jr, "steps", VT::array, where)) {
        const std::string swhere = where + " step #" + std::to_string(r.steps.size());
        if (!js.is_object()) detail::malformed(swhere + " must be an object");
        TraceStep step;
        step.t = detail::number_of(require(js, "t", VT::number_float, swhere));
        const std::string action = require(js, "action", VT::string, swhere).get<std::string>();
        auto sym = symbol_of.find(action);
        // Unknown names get a symbol that can never be in the alphabet, so
        // validation reports them as UnresolvedSymbol with the other violations.
        step.symbol = sym == symbol_of.end() ? detail::kUnresolvedMark + action : sym->second;
        if (auto p = js.find("params"); p != js.end()) {
          if (!p->is_object()) detail::malformed(swhere + ": key 'params' has the wrong type");
          for (const auto& [k, v] : p->items()) {
            if (!v.is_number()) detail::malformed(swhere + ": param '" + k + "' is not a number");
            step.params.emplace(k, v.get<double>());
          }
        }
        r.steps.push_back(std::move(step));
      }
      references.push_back(std::move(r));
    }
  }

  return BehaviorCatalog::create(std::move(version), std::move(actions), std::move(references));
}

inline BehaviorCatalog load_catalog(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_catalog(in);
}

/// Canonical catalog document with a fixed key order.
inline std::string serialize_catalog(const BehaviorCatalog& catalog, int indent = 2) {
  using oj = nlohmann::ordered_json;
  oj doc;
  doc["version"] = catalog.version();
  oj actions = oj::array();
  for (const auto& a : catalog.actions()) {
    oj ja;
    ja["name"] = a.name;
    ja["symbol"] = a.symbol;
    oj subs = oj::array();
    for (const auto& s : a.subactions) {
      oj js;
      js["name"] = s.name;
      js["unit"] = s.unit;
      js["min"] = s.min;
      js["max"] = s.max;
      subs.push_back(std::move(js));
    }
    ja["subactions"] = std::move(subs);
    actions.push_back(std::move(ja));
  }
  doc["actions"] = std::move(actions);
  oj refs = oj::array();
  for (const auto& r : catalog.references()) {
    oj jr;
    jr["id"] = r.id;
    jr["scenario"] = r.scenario;
    oj steps = oj::array();
    for (const auto& s : r.steps) {
      oj js;
      js["t"] = s.t;
      js["action"] = catalog.find_by_symbol(s.symbol)->name;
      oj params = oj::object();
      for (const auto& [k, v] : s.params) params[k] = v;
      js["params"] = std::move(params);
      steps.push_back(std::move(js));
    }
    jr["steps"] = std::move(steps);
    refs.push_back(std::move(jr));
  }
  doc["references"] = std::move(refs);
  return doc.dump(indent) + "\n";
}

}  // namespace loa
