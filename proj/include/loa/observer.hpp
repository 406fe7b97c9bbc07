#pragma once

// Observation sessions: events stream in, are looked up in the catalog, and
// matched ones are appended to the observed trace. Nothing is scored until the
// session ends and the equivalency gate passes.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"

#include "loa/catalog.hpp"
#include "loa/error.hpp"
#include "loa/trace.hpp"

namespace loa {

enum class TimestampPolicy { RejectOutOfOrder, ClampOutOfOrder };

struct SessionConfig {
  double min_coverage = 0.8;
  std::size_t min_observed_length = 1;
  TimestampPolicy timestamp_policy = TimestampPolicy::RejectOutOfOrder;

  void validate() const {
    if (!(min_coverage >= 0.0 && min_coverage <= 1.0))
      throw Error(ErrorKind::InvalidConfig, "min_coverage must lie in [0, 1]");
    if (min_observed_length < 1)
      throw Error(ErrorKind::InvalidConfig, "min_observed_length must be at least 1");
  }
};

/// matched + unknown + out_of_order == total_events always holds. parse_error
/// and out_of_range are sub-counts of unknown and matched respectively; clamped
/// counts events whose timestamp was raised under ClampOutOfOrder.
struct Counters {
  std::size_t total_events = 0;
  std::size_t matched = 0;
  std::size_t unknown = 0;
  std::size_t out_of_range = 0;
  std::size_t out_of_order = 0;
  std::size_t parse_error = 0;
  std::size_t clamped = 0;

  double coverage() const noexcept {
    return total_events == 0 ? 0.0
                             : static_cast<double>(matched) / static_cast<double>(total_events);
  }

  friend bool operator==(const Counters&, const Counters&) = default;
};

enum class Verdict { Pass, ForeignSymbol, EmptyObservation, TraceTooShort, InsufficientCoverage };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::ForeignSymbol: return "ForeignSymbol";
    case Verdict::EmptyObservation: return "EmptyObservation";
    case Verdict::TraceTooShort: return "TraceTooShort";
    case Verdict::InsufficientCoverage: return "InsufficientCoverage";
  }
  return "Unknown";
}

/// The gate in front of scoring: the observed trace must share the catalog
/// alphabet, meet the length floor, and have enough of the stream matched.
/// This is alphabet compatibility, not sequence equality.
inline Verdict equivalency_check(const Trace& trace, const Counters& counters,
                                 const BehaviorCatalog& catalog, const SessionConfig& config) {
  for (const auto& step : trace.steps)
    if (!catalog.has_symbol(step.symbol)) return Verdict::ForeignSymbol;
  if (trace.empty()) return Verdict::EmptyObservation;
  if (trace.size() < config.min_observed_length) return Verdict::TraceTooShort;
  if (counters.coverage() < config.min_coverage) return Verdict::InsufficientCoverage;
  return Verdict::Pass;
}

struct SessionResult {
  Trace trace;
  Counters counters;
  Verdict verdict = Verdict::EmptyObservation;
  SessionConfig config;

  double coverage() const noexcept { return counters.coverage(); }
  bool passed() const noexcept { return verdict == Verdict::Pass; }

  /// Human-readable reason, e.g. "InsufficientCoverage (0.50 < 0.80)".
  std::string describe_verdict() const {
    std::string out(to_string(verdict));
    char buf[64];
    switch (verdict) {
      case Verdict::InsufficientCoverage:
        std::snprintf(buf, sizeof buf, " (%.2f < %.2f)", coverage(), config.min_coverage);
        out += buf;
        break;
      case Verdict::TraceTooShort:
        std::snprintf(buf, sizeof buf, " (%zu < %zu)", trace.size(), config.min_observed_length);
        out += buf;
        break;
      default: break;
    }
    return out;
  }
};

class Session {
 public:
  enum class State { Open, Ended };

  const Trace& accumulated() const noexcept { return trace_; }
  const Counters& counters() const noexcept { return counters_; }
  const std::string& scenario() const noexcept { return trace_.scenario; }
  const SessionConfig& config() const noexcept { return config_; }
  State state() const noexcept { return state_; }

  /// Looks the event up and appends it when it matches. Unknown and
  /// out-of-order events are counted but never appended.
  MatchOutcome observe(const ObservationEvent& event) {
    require_open();
    if (!std::isfinite(event.t) || event.t < 0.0)
      throw Error(ErrorKind::InvalidEvent, "event timestamp must be finite and non-negative");

    double t = event.t;
    if (seen_any_ && t < last_t_) {
      if (config_.timestamp_policy == TimestampPolicy::RejectOutOfOrder) {
        ++counters_.total_events;
        ++counters_.out_of_order;
        return MatchOutcome::unknown();
      }
      t = last_t_;
      ++counters_.clamped;
    }
    seen_any_ = true;
    last_t_ = t;
    ++counters_.total_events;

    MatchOutcome outcome = encode_event(*catalog_, event);
    if (!outcome.matched()) {
      ++counters_.unknown;
      return outcome;
    }
    ++counters_.matched;
    if (outcome.out_of_range) ++counters_.out_of_range;
    trace_.steps.push_back(TraceStep{t, outcome.symbol, event.params});
    return outcome;
  }

  /// A stream line that could not be decoded: counted as unknown.
  void record_parse_error() {
    require_open();
    ++counters_.total_events;
    ++counters_.unknown;
    ++counters_.parse_error;
  }

  SessionResult end() {
    require_open();
    state_ = State::Ended;
    SessionResult r;
    r.verdict = equivalency_check(trace_, counters_, *catalog_, config_);
    r.trace = trace_;
    r.counters = counters_;
    r.config = config_;
    return r;
  }

 private:
  friend Session begin_session(const BehaviorCatalog&, std::string_view, const SessionConfig&);

  Session(const BehaviorCatalog& catalog, std::string scenario, const SessionConfig& config)
      : catalog_(&catalog), config_(config) {
    trace_.scenario = std::move(scenario);
  }

  void require_open() const {
    if (state_ != State::Open) throw Error(ErrorKind::SessionEnded, "session has already ended");
  }

  const BehaviorCatalog* catalog_;
  SessionConfig config_;
  Trace trace_;
  Counters counters_;
  State state_ = State::Open;
  bool seen_any_ = false;
  double last_t_ = 0.0;
};

/// Opens a session scoped to `scenario`. The catalog must outlive the session.
inline Session begin_session(const BehaviorCatalog& catalog, std::string_view scenario,
                             const SessionConfig& config = {}) {
  config.validate();
  if (!catalog.has_scenario(scenario))
    throw Error(ErrorKind::UnknownScenario,
                "no reference traces for scenario '" + std::string(scenario) + "'");
  return Session(catalog, std::string(scenario), config);
}

inline MatchOutcome observe(Session& session, const ObservationEvent& event) {
  return session.observe(event);
}

inline SessionResult end_session(Session& session) { return session.end(); }

// ---------------------------------------------------------------------------
// Newline-delimited event records: {"t": <number>, "action": <string>, "params": {...}}
// ---------------------------------------------------------------------------

/// Decodes one record; nullopt when the line is not a valid event.
inline std::optional<ObservationEvent> parse_event_line(std::string_view line) {
  using json = nlohmann::json;
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;

  auto t = j.find("t");
  auto action = j.find("action");
  if (t == j.end() || !t->is_number() || action == j.end() || !action->is_string())
    return std::nullopt;

  ObservationEvent ev;
  ev.t = t->get<double>();
  if (!std::isfinite(ev.t) || ev.t < 0.0) return std::nullopt;
  ev.action = action->get<std::string>();
  if (auto p = j.find("params"); p != j.end()) {
    if (!p->is_object()) return std::nullopt;
    for (const auto& [k, v] : p->items()) {
      if (!v.is_number()) return std::nullopt;
      ev.params.emplace(k, v.get<double>());
    }
  }
  return ev;
}

/// Encodes one record (no trailing newline). Numbers use the shortest
/// representation that round-trips.
inline std::string render_event_line(const ObservationEvent& ev) {
  nlohmann::ordered_json j;
  j["t"] = ev.t;
  j["action"] = ev.action;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ev.params) params[k] = v;
  j["params"] = std::move(params);
  return j.dump();
}

/// Renders a trace as event records, mapping symbols back to action names.
inline void write_events(std::ostream& out, const Trace& trace, const BehaviorCatalog& catalog) {
  for (const auto& step : trace.steps) {
    const ActionDef* def = catalog.find_by_symbol(step.symbol);
    if (def == nullptr)
      throw Error(ErrorKind::UnresolvedSymbol, "symbol '" + step.symbol + "' is not in the alphabet");
    out << render_event_line(ObservationEvent{step.t, def->name, step.params}) << '\n';
  }
}

/// Replays a newline-delimited stream into an open session. Blank lines are skipped.
inline void ingest(std::istream& in, Session& session) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto ev = parse_event_line(line);
    if (ev)
      session.observe(*ev);
    else
      session.record_parse_error();
  }
}

}  // namespace loa
