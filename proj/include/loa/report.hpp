#pragma once

// Report rendering. Reals are written with 12 significant digits so identical
// inputs give byte-identical output; keys are emitted in a fixed order.

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "loa/observer.hpp"
#include "loa/scoring.hpp"
#include "loa/trace_gen.hpp"

namespace loa::report {

using ojson = nlohmann::ordered_json;

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// The value as it reads after rounding to 12 significant digits.
inline double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

inline ojson counters_json(const Counters& c) {
  ojson j;
  j["total_events"] = c.total_events;
  j["matched"] = c.matched;
  j["unknown"] = c.unknown;
  j["out_of_order"] = c.out_of_order;
  j["out_of_range"] = c.out_of_range;
  j["parse_error"] = c.parse_error;
  j["clamped"] = c.clamped;
  return j;
}

inline ojson score_json(const ObservationalScore& s, const Counters& counters) {
  ojson j;
  j["score"] = rounded(s.value);
  j["normalized_distance"] = rounded(s.normalized_distance);
  j["raw_distance"] = rounded(s.raw_distance);
  j["matched_reference"] = s.matched_reference;
  j["sae_level"] = map_to_sae(s).level;
  j["alfus_level"] = map_to_alfus(s).level;
  j["coverage"] = rounded(s.coverage);
  j["counters"] = counters_json(counters);
  j["scale_note"] = std::string(kScaleNote);
  j["alfus_note"] = std::string(kAlfusNote);
  j["scenario"] = s.scenario;
  ojson per = ojson::array();
  for (const auto& r : s.per_reference) {
    ojson e;
    e["reference"] = r.reference_id;
    e["raw_distance"] = rounded(r.raw);
    e["normalized_distance"] = rounded(r.normalized);
    per.push_back(std::move(e));
  }
  j["per_reference"] = std::move(per);
  return j;
}

inline std::string counters_text(const Counters& c) {
  return "total=" + std::to_string(c.total_events) + " matched=" + std::to_string(c.matched) +
         " unknown=" + std::to_string(c.unknown) + " out_of_order=" + std::to_string(c.out_of_order) +
         " out_of_range=" + std::to_string(c.out_of_range) +
         " parse_error=" + std::to_string(c.parse_error) + " clamped=" + std::to_string(c.clamped);
}

inline void write_score_text(std::ostream& out, const ObservationalScore& s, const Counters& c) {
  auto row = [&out](const char* key, const std::string& value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-20s", key);
    out << buf << value << '\n';
  };
  row("scenario", s.scenario);
  row("score", format_number(s.value));
  row("normalized_distance", format_number(s.normalized_distance));
  row("raw_distance", format_number(s.raw_distance));
  row("matched_reference", s.matched_reference);
  row("sae_level", std::to_string(map_to_sae(s).level) + " (" + std::string(kScaleNote) + ")");
  row("alfus_level", std::to_string(map_to_alfus(s).level) + " (extrapolated)");
  row("coverage", format_number(s.coverage));
  row("counters", counters_text(c));
  for (const auto& r : s.per_reference)
    row("reference", r.reference_id + " normalized=" + format_number(r.normalized) +
                         " raw=" + format_number(r.raw));
}

inline ojson verdict_json(const SessionResult& r) {
  ojson j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["detail"] = r.describe_verdict();
  j["coverage"] = rounded(r.coverage());
  j["counters"] = counters_json(r.counters);
  return j;
}

inline ojson comparison_json(const ComparisonReport& c, const Counters& ca, const Counters& cb) {
  ojson j;
  j["scenario"] = c.score_a.scenario;
  j["a"] = score_json(c.score_a, ca);
  j["b"] = score_json(c.score_b, cb);
  j["delta"] = rounded(c.delta);
  j["higher_autonomy"] = std::string(to_string(c.higher_autonomy));
  j["scale_note"] = std::string(kScaleNote);
  return j;
}

inline void write_comparison_text(std::ostream& out, const ComparisonReport& c) {
  out << "scenario          " << c.score_a.scenario << '\n';
  out << "A score           " << format_number(c.score_a.value) << "  sae_level "
      << c.sae_a.level << "  reference " << c.score_a.matched_reference << '\n';
  out << "B score           " << format_number(c.score_b.value) << "  sae_level "
      << c.sae_b.level << "  reference " << c.score_b.matched_reference << '\n';
  out << "delta             " << format_number(c.delta) << '\n';
  out << "higher_autonomy   " << to_string(c.higher_autonomy) << '\n';
  out << "note              " << kScaleNote << '\n';
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "rate,mean_score,std_score\n";
  for (const auto& r : rows)
    out << format_number(r.rate) << ',' << format_number(r.mean_score) << ','
        << format_number(r.std_score) << '\n';
}

inline ojson sweep_json(const std::vector<SweepRow>& rows) {
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    ojson e;
    e["rate"] = rounded(r.rate);
    e["mean_score"] = rounded(r.mean_score);
    e["std_score"] = rounded(r.std_score);
    arr.push_back(std::move(e));
  }
  return arr;
}

inline void write_sweep_text(std::ostream& out, const std::vector<SweepRow>& rows) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-8s %-16s %-16s\n", "rate", "mean_score", "std_score");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-8s %-16s %-16s\n", format_number(r.rate).c_str(),
                  format_number(r.mean_score).c_str(), format_number(r.std_score).c_str());
    out << buf;
  }
}

}  // namespace loa::report
