#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace loa {

/// Subaction values keyed by subaction name.
using Params = std::map<std::string, double, std::less<>>;

/// One encoded step: when it happened (seconds from observation start), which
/// action symbol it is, and the subaction values seen with it.
struct TraceStep {
  double t = 0.0;
  std::string symbol;
  Params params;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// Ordered symbol sequence. Holds both the observed sequence accumulated by a
/// session and, via ReferenceTrace, recorded human sequences.
struct Trace {
  std::string scenario;
  std::vector<TraceStep> steps;

  std::size_t size() const noexcept { return steps.size(); }
  bool empty() const noexcept { return steps.empty(); }

  std::vector<std::string> symbols() const {
    std::vector<std::string> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.symbol);
    return out;
  }

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// A raw observed action before lookup. `action` is the action name, not its symbol.
struct ObservationEvent {
  double t = 0.0;
  std::string action;
  Params params;

  friend bool operator==(const ObservationEvent&, const ObservationEvent&) = default;
};

}  // namespace loa
