#pragma once

// Synthetic observed traces made by perturbing a human reference trace with
// the same four operations the OSA distance counts: deletion, substitution,
// insertion and adjacent transposition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "loa/catalog.hpp"
#include "loa/error.hpp"
#include "loa/scoring.hpp"
#include "loa/trace.hpp"

namespace loa {

struct PerturbationConfig {
  double substitution_rate = 0.0;
  double insertion_rate = 0.0;
  double deletion_rate = 0.0;
  double transposition_rate = 0.0;
  double param_noise_sigma = 0.0;  // fraction of each subaction's (max - min)
  std::uint64_t seed = 0;

  void validate() const {
    for (double r : {substitution_rate, insertion_rate, deletion_rate, transposition_rate})
      if (!(r >= 0.0 && r <= 1.0))
        throw Error(ErrorKind::InvalidConfig, "perturbation rates must lie in [0, 1]");
    if (!(param_noise_sigma >= 0.0) || !std::isfinite(param_noise_sigma))
      throw Error(ErrorKind::InvalidConfig, "param_noise_sigma must be finite and non-negative");
  }
};

namespace detail {

// Distribution objects in <random> are implementation-defined; these are not,
// so a seed reproduces the same trace on every standard library.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline Params schema_midpoints(const ActionDef& def) {
  Params p;
  for (const auto& s : def.subactions) p.emplace(s.name, s.min + (s.max - s.min) / 2.0);
  return p;
}

}  // namespace detail

/// Perturbs `reference` per `config`. Deterministic for a fixed seed.
///
/// Per reference step: delete with deletion_rate; otherwise substitute a
/// different symbol with substitution_rate, then insert a random symbol after
/// it with insertion_rate. A second pass swaps adjacent steps with
/// transposition_rate (a swapped step is not swapped again). Substituted and
/// inserted steps take their schema midpoints as parameter values.
///
/// Timestamps stay positional when the length is unchanged; otherwise they
/// are re-spaced uniformly over the reference's time span.
inline Trace generate_trace(const ReferenceTrace& reference, const BehaviorCatalog& catalog,
                            const PerturbationConfig& config) {
  config.validate();
  const ReferenceTrace* owned = catalog.find_reference(reference.id);
  if (owned == nullptr || !(*owned == reference))
    throw Error(ErrorKind::ForeignReference,
                "reference '" + reference.id + "' does not belong to the catalog");

  const auto& actions = catalog.actions();
  detail::PortableRng rng(config.seed);

  std::vector<TraceStep> out;
  out.reserve(reference.steps.size() * 2);
  bool length_changed = false;

  for (const auto& step : reference.steps) {
    if (rng.uniform() < config.deletion_rate) {
      length_changed = true;
      continue;
    }
    TraceStep s = step;
    if (rng.uniform() < config.substitution_rate && actions.size() > 1) {
      const std::size_t current = *catalog.symbol_index(step.symbol);
      std::size_t pick = rng.index(actions.size() - 1);
      if (pick >= current) ++pick;
      s.symbol = actions[pick].symbol;
      s.params = detail::schema_midpoints(actions[pick]);
    }
    out.push_back(std::move(s));
    if (rng.uniform() < config.insertion_rate) {
      const ActionDef& def = actions[rng.index(actions.size())];
      out.push_back(TraceStep{step.t, def.symbol, detail::schema_midpoints(def)});
      length_changed = true;
    }
  }

  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    if (rng.uniform() < config.transposition_rate) {
      std::swap(out[k].symbol, out[k + 1].symbol);
      std::swap(out[k].params, out[k + 1].params);
      ++k;
    }
  }

  if (config.param_noise_sigma > 0.0) {
    for (auto& s : out) {
      const ActionDef* def = catalog.find_by_symbol(s.symbol);
      for (auto& [name, value] : s.params) {
        const SubactionSchema* schema = def->find_subaction(name);
        if (schema == nullptr) continue;
        value += rng.normal() * config.param_noise_sigma * (schema->max - schema->min);
        value = std::clamp(value, schema->min, schema->max);
      }
    }
  }

  if (length_changed && !out.empty()) {
    const double start = reference.steps.front().t;
    const double span = reference.steps.back().t - start;
    const std::size_t n = out.size();
    for (std::size_t k = 0; k < n; ++k)
      out[k].t = n == 1 ? start
                        : start + span * static_cast<double>(k) / static_cast<double>(n - 1);
  }

  return Trace{reference.scenario, std::move(out)};
}

struct SweepRow {
  double rate = 0.0;
  double mean_score = 0.0;
  double std_score = 0.0;  // sample standard deviation; 0 for a single trial
};

/// Scores `trials_per_rate` substitution-only perturbations per rate. Trial i
/// uses seed base_seed + i.
inline std::vector<SweepRow> sweep(const ReferenceTrace& reference, const BehaviorCatalog& catalog,
                                   const std::vector<double>& rates, std::size_t trials_per_rate,
                                   std::uint64_t base_seed, const ScoringOptions& options = {}) {
  if (trials_per_rate < 1)
    throw Error(ErrorKind::PreconditionFailed, "trials_per_rate must be at least 1");

  std::vector<SweepRow> rows;
  rows.reserve(rates.size());
  std::vector<double> scores(trials_per_rate);
  for (double rate : rates) {
    for (std::size_t i = 0; i < trials_per_rate; ++i) {
      PerturbationConfig cfg;
      cfg.substitution_rate = rate;
      cfg.seed = base_seed + i;
      const Trace trace = generate_trace(reference, catalog, cfg);
      scores[i] = compute_score(trace, catalog, reference.scenario, options).value;
    }
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(trials_per_rate);
    double ss = 0.0;
    for (double s : scores) ss += (s - mean) * (s - mean);
    const double sd =
        trials_per_rate > 1 ? std::sqrt(ss / static_cast<double>(trials_per_rate - 1)) : 0.0;
    rows.push_back({rate, mean, sd});
  }
  return rows;
}

}  // namespace loa
