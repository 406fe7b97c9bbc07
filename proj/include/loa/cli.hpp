#pragma once

// Command-line front end. run() takes explicit streams so the whole command
// surface can be exercised in-process.
//
// Exit codes: 0 success, 1 domain failure, 2 usage or parse error, 3 I/O error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

#include "loa/catalog.hpp"
#include "loa/error.hpp"
#include "loa/observer.hpp"
#include "loa/report.hpp"
#include "loa/scoring.hpp"
#include "loa/trace_gen.hpp"

namespace loa::cli {

enum ExitCode : int { kOk = 0, kDomainFailure = 1, kUsageError = 2, kIoError = 3 };

namespace detail {

struct Failure {
  int code;
  std::string message;
};

struct GlobalOptions {
  std::string catalog_path;
  std::string scenario;
  bool json = false;
};

struct ScoreFlags {
  std::string normalization = "max";
  bool weighted = false;
  bool no_transpositions = false;
  double min_coverage = 0.8;
  std::size_t min_length = 1;
  bool clamp_out_of_order = false;
};

inline BehaviorCatalog open_catalog(const std::string& path) {
  if (path.empty()) throw Failure{kUsageError, "--catalog is required"};
  std::ifstream f(path);
  if (!f) throw Failure{kIoError, "cannot open catalog '" + path + "'"};
  return load_catalog(f);
}

inline ScoringOptions scoring_options(const ScoreFlags& flags) {
  ScoringOptions o;
  if (flags.normalization == "sum")
    o.normalization = edit::Normalization::SumLength;
  else if (flags.normalization == "path")
    o.normalization = edit::Normalization::AlignmentPath;
  if (flags.weighted) o.cost.substitution = edit::SubstitutionMode::ParameterAware;
  o.cost.transpositions_enabled = !flags.no_transpositions;
  return o;
}

inline SessionConfig session_config(const ScoreFlags& flags) {
  SessionConfig c;
  c.min_coverage = flags.min_coverage;
  c.min_observed_length = flags.min_length;
  c.timestamp_policy =
      flags.clamp_out_of_order ? TimestampPolicy::ClampOutOfOrder : TimestampPolicy::RejectOutOfOrder;
  return c;
}

/// Replays a trace file (or `in` for "-") through a fresh session.
inline SessionResult observe_file(const BehaviorCatalog& catalog, const std::string& scenario,
                                  const std::string& path, const SessionConfig& config,
                                  std::istream& in) {
  Session session = begin_session(catalog, scenario, config);
  if (path.empty() || path == "-") {
    ingest(in, session);
  } else {
    std::ifstream f(path);
    if (!f) throw Failure{kIoError, "cannot open trace '" + path + "'"};
    ingest(f, session);
  }
  return session.end();
}

inline std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const char* begin = item.c_str();
    char* end = nullptr;
    const double r = std::strtod(begin, &end);
    if (item.empty() || end == begin || *end != '\0')
      throw Failure{kUsageError, "malformed rate '" + item + "' in --rates"};
    if (!(r >= 0.0 && r <= 1.0))
      throw Failure{kUsageError, "rate " + item + " is outside [0, 1]"};
    rates.push_back(r);
  }
  if (rates.empty()) throw Failure{kUsageError, "--rates is empty"};
  return rates;
}

inline const ReferenceTrace& pick_reference(const BehaviorCatalog& catalog,
                                            const std::string& scenario,
                                            const std::string& reference_id) {
  if (!reference_id.empty()) {
    const ReferenceTrace* ref = catalog.find_reference(reference_id);
    if (ref == nullptr)
      throw Error(ErrorKind::ForeignReference,
                  "reference '" + reference_id + "' is not in the catalog");
    if (!scenario.empty() && ref->scenario != scenario)
      throw Error(ErrorKind::ForeignReference, "reference '" + reference_id +
                                                   "' belongs to scenario '" + ref->scenario +
                                                   "', not '" + scenario + "'");
    return *ref;
  }
  if (scenario.empty()) throw Failure{kUsageError, "--scenario or --reference is required"};
  const auto refs = catalog.references_for(scenario);
  if (refs.empty())
    throw Error(ErrorKind::UnknownScenario, "no reference traces for scenario '" + scenario + "'");
  return *refs.front();
}

inline int cmd_catalog_validate(const std::string& path, std::ostream& out) {
  try {
    const BehaviorCatalog cat = open_catalog(path);
    out << "OK: " << cat.actions().size() << " actions, " << cat.references().size()
        << " references\n";
    return kOk;
  } catch (const CatalogError& e) {
    out << "INVALID: " << e.violations().size() << " violation(s)\n";
    for (const auto& v : e.violations()) out << "  " << to_string(v.kind) << ": " << v.message << '\n';
    return e.kind() == ErrorKind::MalformedDocument ? kUsageError : kDomainFailure;
  }
}

inline int cmd_score(const GlobalOptions& g, const ScoreFlags& flags, const std::string& trace_path,
                     std::istream& in, std::ostream& out, std::ostream& err) {
  const BehaviorCatalog cat = open_catalog(g.catalog_path);
  if (g.scenario.empty()) throw Failure{kUsageError, "--scenario is required"};
  const SessionResult result = observe_file(cat, g.scenario, trace_path, session_config(flags), in);
  if (!result.passed()) {
    if (g.json) out << report::verdict_json(result).dump(2) << '\n';
    err << "error: " << result.describe_verdict() << '\n';
    return kDomainFailure;
  }
  const ObservationalScore score = compute_score(result, cat, scoring_options(flags));
  if (g.json)
    out << report::score_json(score, result.counters).dump(2) << '\n';
  else
    report::write_score_text(out, score, result.counters);
  return kOk;
}

inline int cmd_compare(const GlobalOptions& g, const ScoreFlags& flags, const std::string& path_a,
                       const std::string& path_b, std::string scenario_a, std::string scenario_b,
                       std::istream& in, std::ostream& out, std::ostream& err) {
  if (scenario_a.empty()) scenario_a = g.scenario;
  if (scenario_b.empty()) scenario_b = g.scenario;
  if (scenario_a.empty() || scenario_b.empty()) throw Failure{kUsageError, "--scenario is required"};
  if (scenario_a != scenario_b)
    throw Error(ErrorKind::ScenarioMismatch,
                "system A observed '" + scenario_a + "' but system B observed '" + scenario_b + "'");
  if (path_a == "-" && path_b == "-") throw Failure{kUsageError, "only one trace may be read from stdin"};

  const BehaviorCatalog cat = open_catalog(g.catalog_path);
  const SessionConfig config = session_config(flags);
  const SessionResult a = observe_file(cat, scenario_a, path_a, config, in);
  const SessionResult b = observe_file(cat, scenario_b, path_b, config, in);
  bool failed = false;
  for (const auto& [name, path, r] : {std::tuple{"A", path_a, &a}, std::tuple{"B", path_b, &b}}) {
    if (!r->passed()) {
      err << "error: system " << name << " (" << path << "): " << r->describe_verdict() << '\n';
      failed = true;
    }
  }
  if (failed) return kDomainFailure;

  const ComparisonReport report = compare_systems(a, b, cat, scoring_options(flags));
  if (g.json)
    out << report::comparison_json(report, a.counters, b.counters).dump(2) << '\n';
  else
    report::write_comparison_text(out, report);
  return kOk;
}

inline int cmd_gen(const GlobalOptions& g, const std::string& reference_id,
                   const PerturbationConfig& config, const std::string& output, std::ostream& out) {
  const BehaviorCatalog cat = open_catalog(g.catalog_path);
  const ReferenceTrace& ref = pick_reference(cat, g.scenario, reference_id);
  const Trace trace = generate_trace(ref, cat, config);
  if (output.empty() || output == "-") {
    write_events(out, trace, cat);
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw Failure{kIoError, "cannot write '" + output + "'"};
    write_events(f, trace, cat);
    if (!f) throw Failure{kIoError, "write to '" + output + "' failed"};
  }
  return kOk;
}

inline int cmd_sweep(const GlobalOptions& g, const ScoreFlags& flags, const std::string& reference_id,
                     const std::string& rates_text, std::size_t trials, std::uint64_t seed, bool csv,
                     std::ostream& out) {
  const std::vector<double> rates = parse_rates(rates_text);
  if (trials < 1) throw Failure{kUsageError, "--trials must be at least 1"};
  const BehaviorCatalog cat = open_catalog(g.catalog_path);
  const ReferenceTrace& ref = pick_reference(cat, g.scenario, reference_id);
  const auto rows = sweep(ref, cat, rates, trials, seed, scoring_options(flags));
  if (csv)
    report::write_sweep_csv(out, rows);
  else if (g.json)
    out << report::sweep_json(rows).dump(2) << '\n';
  else
    report::write_sweep_text(out, rows);
  return kOk;
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedDocument:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidCostModel: return kUsageError;
    default: return kDomainFailure;
  }
}

inline void add_score_flags(CLI::App* cmd, ScoreFlags& f) {
  cmd->add_option("--normalization", f.normalization, "max | sum | path")
      ->check(CLI::IsMember({"max", "sum", "path"}));
  cmd->add_flag("--weighted", f.weighted, "parameter-aware substitution cost");
  cmd->add_flag("--no-transpositions", f.no_transpositions, "plain Levenshtein instead of OSA");
  cmd->add_option("--min-coverage", f.min_coverage, "matched/total floor")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--min-length", f.min_length, "minimum observed trace length")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--clamp-out-of-order", f.clamp_out_of_order,
                "clamp late timestamps instead of rejecting the event");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::istream& in = std::cin,
               std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace detail;

  CLI::App app{"Observational level-of-autonomy scoring", "loa"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--catalog", g.catalog_path, "behavior catalog document");
  app.add_option("--scenario", g.scenario, "scenario id");
  app.add_flag("--json", g.json, "structured output");

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "catalog operations");
  catalog_cmd->require_subcommand(1);
  std::string validate_path;
  CLI::App* validate_cmd = catalog_cmd->add_subcommand("validate", "check a catalog document");
  validate_cmd->add_option("path", validate_path, "catalog document (defaults to --catalog)");

  ScoreFlags score_flags;
  std::string trace_path = "-";
  CLI::App* score_cmd = app.add_subcommand("score", "score an observed event stream");
  score_cmd->add_option("trace", trace_path, "event file, or - for stdin");
  add_score_flags(score_cmd, score_flags);

  ScoreFlags compare_flags;
  std::string path_a, path_b, scenario_a, scenario_b;
  CLI::App* compare_cmd = app.add_subcommand("compare", "compare two observed systems");
  compare_cmd->add_option("trace_a", path_a, "event file of system A")->required();
  compare_cmd->add_option("trace_b", path_b, "event file of system B")->required();
  compare_cmd->add_option("--scenario-a", scenario_a, "scenario of system A (defaults to --scenario)");
  compare_cmd->add_option("--scenario-b", scenario_b, "scenario of system B (defaults to --scenario)");
  add_score_flags(compare_cmd, compare_flags);

  PerturbationConfig perturb;
  std::string gen_reference, gen_output;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a perturbed trace from a reference");
  gen_cmd->add_option("--reference", gen_reference, "reference id (defaults to the scenario's first)");
  gen_cmd->add_option("--sub-rate", perturb.substitution_rate)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--ins-rate", perturb.insertion_rate)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--del-rate", perturb.deletion_rate)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--swap-rate", perturb.transposition_rate)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--param-noise", perturb.param_noise_sigma, "sigma as a fraction of range")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", perturb.seed);
  gen_cmd->add_option("-o,--output", gen_output, "output file (defaults to stdout)");

  ScoreFlags sweep_flags;
  std::string sweep_reference, rates_text = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::size_t trials = 100;
  std::uint64_t sweep_seed = 0;
  bool csv = false;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "mean score per substitution rate");
  sweep_cmd->add_option("--reference", sweep_reference, "reference id (defaults to the scenario's first)");
  sweep_cmd->add_option("--rates", rates_text, "comma-separated rates in [0, 1]");
  sweep_cmd->add_option("--trials", trials, "trials per rate");
  sweep_cmd->add_option("--seed", sweep_seed, "base seed; trial i uses seed + i");
  sweep_cmd->add_flag("--csv", csv, "CSV output");
  add_score_flags(sweep_cmd, sweep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (validate_cmd->parsed())
      return cmd_catalog_validate(validate_path.empty() ? g.catalog_path : validate_path, out);
    if (score_cmd->parsed()) return cmd_score(g, score_flags, trace_path, in, out, err);
    if (compare_cmd->parsed())
      return cmd_compare(g, compare_flags, path_a, path_b, scenario_a, scenario_b, in, out, err);
    if (gen_cmd->parsed()) return cmd_gen(g, gen_reference, perturb, gen_output, out);
    if (sweep_cmd->parsed())
      return cmd_sweep(g, sweep_flags, sweep_reference, rates_text, trials, sweep_seed, csv, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const CatalogError& e) {
    for (const auto& v : e.violations()) err << "error: " << to_string(v.kind) << ": " << v.message << '\n';
    return e.kind() == ErrorKind::MalformedDocument ? kUsageError : kDomainFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kUsageError;
}

}  // namespace loa::cli
