#pragma once

// Observational Score: 5.9 x the normalized edit distance between the observed
// action sequence and the closest human reference sequence of the scenario.
// Larger distance from human behavior means a more autonomous system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "loa/catalog.hpp"
#include "loa/edit_distance.hpp"
#include "loa/error.hpp"
#include "loa/observer.hpp"
#include "loa/trace.hpp"

namespace loa {

inline constexpr double kMaxScore = 5.9;

struct ScoringOptions {
  edit::CostModel cost{};
  edit::Normalization normalization = edit::Normalization::MaxLength;
};

struct ReferenceDistance {
  std::string reference_id;
  double raw = 0.0;
  double normalized = 0.0;
};

struct ObservationalScore {
  double value = 0.0;
  double raw_distance = 0.0;
  double normalized_distance = 0.0;
  std::string matched_reference;
  std::vector<ReferenceDistance> per_reference;
  double coverage = 1.0;
  std::string scenario;
};

/// Parameter-aware substitution between two steps sharing a symbol: mean over
/// the subactions both carry of |difference| / (max - min), clamped to [0, 1].
/// Steps with no shared subactions cost 0.
inline double parameter_substitution_cost(const TraceStep& a, const TraceStep& b,
                                          const ActionDef& def) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& schema : def.subactions) {
    auto ia = a.params.find(schema.name);
    auto ib = b.params.find(schema.name);
    if (ia == a.params.end() || ib == b.params.end()) continue;
    const double range = schema.max - schema.min;
    const double diff = std::abs(ia->second - ib->second);
    sum += range > 0.0 ? std::min(diff / range, 1.0) : (diff > 0.0 ? 1.0 : 0.0);
    ++count;
  }
  return count == 0 ? 0.0 : std::clamp(sum / static_cast<double>(count), 0.0, 1.0);
}

/// Distance from a human reference trace to an observed trace. Both must use
/// only catalog symbols.
inline edit::NormalizedDistance trace_distance(const Trace& reference, const Trace& observed,
                                               const BehaviorCatalog& catalog,
                                               const ScoringOptions& options) {
  options.cost.validate();
  const auto ref = catalog.encode_symbols(reference.steps);
  const auto obs = catalog.encode_symbols(observed.steps);
  if (!ref || !obs)
    throw Error(ErrorKind::EquivalencyNotEstablished, "trace uses symbols outside the alphabet");

  if (options.cost.substitution == edit::SubstitutionMode::Constant)
    return edit::normalized_distance_detail(*ref, *obs, options.normalization, options.cost);

  const auto& actions = catalog.actions();
  auto same = [&](std::size_t i, std::size_t j) { return (*ref)[i] == (*obs)[j]; };
  auto sub = [&](std::size_t i, std::size_t j) {
    if ((*ref)[i] != (*obs)[j]) return options.cost.substitute_cost;
    return parameter_substitution_cost(reference.steps[i], observed.steps[j], actions[(*ref)[i]]);
  };
  const std::size_t m = ref->size();
  const std::size_t n = obs->size();
  if (options.normalization == edit::Normalization::AlignmentPath) {
    const auto al = edit::weighted_alignment_indexed<true>(m, n, options.cost, same, sub);
    return {al.cost, edit::normalize(al.cost, m, n, options.normalization, al.length)};
  }
  const auto al = edit::weighted_alignment_indexed(m, n, options.cost, same, sub);
  return {al.cost, edit::normalize(al.cost, m, n, options.normalization)};
}

/// Scores an observed trace against every reference of `scenario` and keeps
/// the closest one. The trace must be non-empty and drawn from the alphabet;
/// otherwise EquivalencyNotEstablished is thrown.
inline ObservationalScore compute_score(const Trace& observed, const BehaviorCatalog& catalog,
                                        std::string_view scenario,
                                        const ScoringOptions& options = {},
                                        double coverage = 1.0) {
  const auto refs = catalog.references_for(scenario);
  if (refs.empty())
    throw Error(ErrorKind::UnknownScenario,
                "no reference traces for scenario '" + std::string(scenario) + "'");
  if (observed.empty())
    throw Error(ErrorKind::EquivalencyNotEstablished, "observed trace is empty");
  for (const auto& s : observed.steps)
    if (!catalog.has_symbol(s.symbol))
      throw Error(ErrorKind::EquivalencyNotEstablished,
                  "observed symbol '" + s.symbol + "' is not in the alphabet");

  ObservationalScore score;
  score.scenario = std::string(scenario);
  score.coverage = coverage;
  double best = std::numeric_limits<double>::infinity();
  for (const ReferenceTrace* ref : refs) {
    const auto d = trace_distance(ref->as_trace(), observed, catalog, options);
    score.per_reference.push_back({ref->id, d.raw, d.normalized});
    // Strict comparison: ties keep the earliest reference in catalog order.
    if (d.normalized < best) {
      best = d.normalized;
      score.normalized_distance = d.normalized;
      score.raw_distance = d.raw;
      score.matched_reference = ref->id;
    }
  }
  score.value = kMaxScore * score.normalized_distance;
  return score;
}

/// Scores a finished session. Refuses results that did not pass the gate.
inline ObservationalScore compute_score(const SessionResult& result, const BehaviorCatalog& catalog,
                                        const ScoringOptions& options = {}) {
  if (!result.passed())
    throw Error(ErrorKind::EquivalencyNotEstablished, result.describe_verdict());
  return compute_score(result.trace, catalog, result.trace.scenario, options, result.coverage());
}

// ---------------------------------------------------------------------------
// Level mapping
// ---------------------------------------------------------------------------

enum class Scale { SAE5, ALFUS10 };

struct Band {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_inclusive = false;
};

struct AutonomyLevel {
  Scale scale = Scale::SAE5;
  int level = 1;
  Band band;
};

/// SAE bands over the score: [0,2) [2,3) [3,4) [4,5) [5,5.9]. The level is a
/// minimum; observation cannot establish a maximum. There is no level 0.
inline AutonomyLevel map_to_sae(double value) {
  if (!(value >= 0.0 && value <= kMaxScore))
    throw Error(ErrorKind::ScoreOutOfRange, "score must lie in [0.0, 5.9]");
  static constexpr double lower[] = {0.0, 2.0, 3.0, 4.0, 5.0};
  int level = 1;
  for (int k = 4; k >= 0; --k) {
    if (value >= lower[k]) {
      level = k + 1;
      break;
    }
  }
  Band band{lower[level - 1], level == 5 ? kMaxScore : lower[level], level == 5};
  return {Scale::SAE5, level, band};
}

inline AutonomyLevel map_to_sae(const ObservationalScore& score) { return map_to_sae(score.value); }

/// ALFUS mapping: the normalized distance is transposed to [0, 10] and cut
/// into unit bands [k-1, k) -> k, with 10 itself mapping to 10. The uniform
/// band width is an extrapolation; no ALFUS table exists for this measure.
inline AutonomyLevel map_to_alfus(const ObservationalScore& score) {
  if (!(score.value >= 0.0 && score.value <= kMaxScore) ||
      !(score.normalized_distance >= 0.0 && score.normalized_distance <= 1.0))
    throw Error(ErrorKind::ScoreOutOfRange, "score must lie in [0.0, 5.9]");
  const double t10 = score.normalized_distance * 10.0;
  const int level = t10 >= 10.0 ? 10 : static_cast<int>(std::floor(t10)) + 1;
  Band band{static_cast<double>(level - 1), static_cast<double>(level), level == 10};
  return {Scale::ALFUS10, level, band};
}

inline constexpr std::string_view kScaleNote =
    "minimum level; observation cannot infer a maximum";
inline constexpr std::string_view kAlfusNote =
    "ALFUS level extrapolated from uniform unit bands over the transposed 0-10 range";

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

enum class Winner { A, B, Tie };

inline std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::A: return "A";
    case Winner::B: return "B";
    case Winner::Tie: return "tie";
  }
  return "tie";
}

struct ComparisonReport {
  ObservationalScore score_a;
  ObservationalScore score_b;
  AutonomyLevel sae_a;
  AutonomyLevel sae_b;
  double delta = 0.0;  // |score_b - score_a|
  Winner higher_autonomy = Winner::Tie;
};

inline ComparisonReport compare_scores(ObservationalScore a, ObservationalScore b) {
  ComparisonReport r;
  r.sae_a = map_to_sae(a);
  r.sae_b = map_to_sae(b);
  r.delta = std::abs(b.value - a.value);
  r.higher_autonomy = a.value == b.value ? Winner::Tie : (b.value > a.value ? Winner::B : Winner::A);
  r.score_a = std::move(a);
  r.score_b = std::move(b);
  return r;
}

/// Blind comparison of two observed systems in the same scenario.
inline ComparisonReport compare_systems(const SessionResult& a, const SessionResult& b,
                                        const BehaviorCatalog& catalog,
                                        const ScoringOptions& options = {}) {
  if (a.trace.scenario != b.trace.scenario)
    throw Error(ErrorKind::ScenarioMismatch, "system A observed '" + a.trace.scenario +
                                                 "' but system B observed '" + b.trace.scenario + "'");
  if (!a.passed())
    throw Error(ErrorKind::EquivalencyNotEstablished, "system A: " + a.describe_verdict());
  if (!b.passed())
    throw Error(ErrorKind::EquivalencyNotEstablished, "system B: " + b.describe_verdict());
  return compare_scores(compute_score(a, catalog, options), compute_score(b, catalog, options));
}

}  // namespace loa
