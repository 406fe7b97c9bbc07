#include "loa/trace_gen.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "support.hpp"

using namespace loa;
using loa::test::desk_catalog;
using loa::test::four_symbol_catalog;

namespace {

const ReferenceTrace& highway() { return *four_symbol_catalog().find_reference("highway_50"); }
const ReferenceTrace& human_a1() { return *desk_catalog().find_reference("human_A1"); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::PreconditionFailed;
}

}  // namespace

TEST(PortableRng, FixedStream) {
  // mt19937_64 with default seed produces 14514284786278117030 first; the
  // uniform draw is its top 53 bits.
  detail::PortableRng rng(5489);
  EXPECT_EQ(rng.uniform(), static_cast<double>(14514284786278117030ull >> 11) * 0x1.0p-53);
  detail::PortableRng a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_EQ(u, b.uniform());
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(a.index(7), 7u);
    b.index(7);
    ASSERT_TRUE(std::isfinite(a.normal()));
    b.normal();
  }
}

TEST(GenerateTrace, ZeroPerturbationIsIdentity) {
  for (std::uint64_t seed : {0ull, 1ull, 77ull}) {
    PerturbationConfig cfg;
    cfg.seed = seed;
    EXPECT_EQ(generate_trace(highway(), four_symbol_catalog(), cfg), highway().as_trace());
    const Trace t = generate_trace(human_a1(), desk_catalog(), cfg);
    EXPECT_EQ(t, human_a1().as_trace());
    EXPECT_EQ(compute_score(t, desk_catalog(), "intersection_A").value, 0.0);
  }
}

TEST(GenerateTrace, SeedDeterminism) {
  PerturbationConfig cfg;
  cfg.substitution_rate = 0.3;
  cfg.insertion_rate = 0.2;
  cfg.deletion_rate = 0.1;
  cfg.transposition_rate = 0.2;
  cfg.param_noise_sigma = 0.1;
  cfg.seed = 42;
  const Trace a = generate_trace(highway(), four_symbol_catalog(), cfg);
  EXPECT_EQ(a, generate_trace(highway(), four_symbol_catalog(), cfg));
  cfg.seed = 43;
  EXPECT_NE(a, generate_trace(highway(), four_symbol_catalog(), cfg));
}

TEST(GenerateTrace, FullSubstitutionChangesEveryPosition) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PerturbationConfig cfg;
    cfg.substitution_rate = 1.0;
    cfg.seed = seed;
    const Trace t = generate_trace(highway(), four_symbol_catalog(), cfg);
    ASSERT_EQ(t.size(), highway().steps.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      EXPECT_NE(t.steps[k].symbol, highway().steps[k].symbol);
      EXPECT_EQ(t.steps[k].t, highway().steps[k].t);
    }
    // Edit distance is bounded by the Hamming distance, not equal to it.
    const auto score = compute_score(t, four_symbol_catalog(), "highway");
    EXPECT_GT(score.raw_distance, 0.0);
    EXPECT_LE(score.raw_distance, 50.0);
  }
}

TEST(GenerateTrace, SubstitutionUsesWholeAlphabet) {
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PerturbationConfig cfg;
    cfg.substitution_rate = 1.0;
    cfg.seed = seed;
    for (const auto& s : generate_trace(human_a1(), desk_catalog(), cfg).steps) seen.insert(s.symbol);
  }
  EXPECT_EQ(seen, (std::set<std::string>{"L", "R", "S"}));
}

TEST(GenerateTrace, AlphabetClosureAndValidTimestamps) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    PerturbationConfig cfg{rate(rng), rate(rng), rate(rng), rate(rng), rate(rng), rng()};
    const auto& cat = i % 2 ? four_symbol_catalog() : desk_catalog();
    const auto& ref = i % 2 ? highway() : human_a1();
    const Trace t = generate_trace(ref, cat, cfg);
    EXPECT_EQ(t.scenario, ref.scenario);
    for (std::size_t k = 0; k < t.size(); ++k) {
      const auto& step = t.steps[k];
      const ActionDef* def = cat.find_by_symbol(step.symbol);
      ASSERT_NE(def, nullptr);
      for (const auto& [name, value] : step.params) {
        const SubactionSchema* schema = def->find_subaction(name);
        ASSERT_NE(schema, nullptr) << name;
        EXPECT_GE(value, schema->min);
        EXPECT_LE(value, schema->max);
      }
      EXPECT_GE(step.t, ref.steps.front().t);
      EXPECT_LE(step.t, ref.steps.back().t);
      if (k > 0) {
        EXPECT_LE(t.steps[k - 1].t, step.t);
      }
    }
  }
}

TEST(GenerateTrace, DeletionRespacesTimestamps) {
  PerturbationConfig cfg;
  cfg.deletion_rate = 0.5;
  for (cfg.seed = 0; cfg.seed < 100; ++cfg.seed) {
    const Trace t = generate_trace(human_a1(), desk_catalog(), cfg);
    if (t.size() < 2 || t.size() == human_a1().steps.size()) continue;
    EXPECT_EQ(t.steps.front().t, 0.0);
    EXPECT_EQ(t.steps.back().t, 10.5);
    const double gap = 10.5 / static_cast<double>(t.size() - 1);
    for (std::size_t k = 0; k < t.size(); ++k) EXPECT_DOUBLE_EQ(t.steps[k].t, gap * static_cast<double>(k));
    return;
  }
  FAIL() << "no seed produced a partial deletion";
}

TEST(GenerateTrace, FullDeletionIsEmpty) {
  PerturbationConfig cfg;
  cfg.deletion_rate = 1.0;
  EXPECT_TRUE(generate_trace(highway(), four_symbol_catalog(), cfg).empty());
}

TEST(GenerateTrace, FullInsertionDoublesLength) {
  PerturbationConfig cfg;
  cfg.insertion_rate = 1.0;
  const Trace t = generate_trace(highway(), four_symbol_catalog(), cfg);
  ASSERT_EQ(t.size(), 100u);
  for (std::size_t k = 0; k < 50; ++k) EXPECT_EQ(t.steps[2 * k].symbol, highway().steps[k].symbol);
}

TEST(GenerateTrace, TranspositionCostsOneEach) {
  PerturbationConfig cfg;
  cfg.transposition_rate = 1.0;
  // Every swap touches a disjoint pair, so OSA distance = number of pairs with
  // differing symbols.
  const Trace t = generate_trace(human_a1(), desk_catalog(), cfg);
  EXPECT_EQ(t.symbols(), (std::vector<std::string>{"S", "L", "S", "R"}));
  EXPECT_EQ(compute_score(t, desk_catalog(), "intersection_A").raw_distance, 2.0);
}

TEST(GenerateTrace, ParamNoiseClampedToSchema) {
  PerturbationConfig cfg;
  cfg.param_noise_sigma = 50.0;
  const Trace t = generate_trace(human_a1(), desk_catalog(), cfg);
  bool hit_bound = false;
  for (const auto& s : t.steps)
    for (const auto& [name, value] : s.params) {
      const auto* schema = desk_catalog().find_by_symbol(s.symbol)->find_subaction(name);
      EXPECT_GE(value, schema->min);
      EXPECT_LE(value, schema->max);
      hit_bound = hit_bound || value == schema->min || value == schema->max;
    }
  EXPECT_TRUE(hit_bound);
  // Symbols are untouched, so the default score stays 0.
  EXPECT_EQ(t.symbols(), human_a1().as_trace().symbols());
}

TEST(GenerateTrace, Errors) {
  ReferenceTrace stranger = human_a1();
  stranger.steps.pop_back();
  EXPECT_EQ(kind_of([&] { generate_trace(stranger, desk_catalog(), {}); }), ErrorKind::ForeignReference);
  EXPECT_EQ(kind_of([&] { generate_trace(highway(), desk_catalog(), {}); }), ErrorKind::ForeignReference);

  PerturbationConfig bad;
  bad.substitution_rate = 1.5;
  EXPECT_EQ(kind_of([&] { generate_trace(human_a1(), desk_catalog(), bad); }), ErrorKind::InvalidConfig);
  bad.substitution_rate = 0.0;
  bad.param_noise_sigma = -1.0;
  EXPECT_EQ(kind_of([&] { generate_trace(human_a1(), desk_catalog(), bad); }), ErrorKind::InvalidConfig);
}

TEST(Sweep, ZeroRateIsZero) {
  for (std::size_t trials : {1u, 5u}) {
    const auto rows = sweep(highway(), four_symbol_catalog(), {0.0}, trials, 0);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].rate, 0.0);
    EXPECT_EQ(rows[0].mean_score, 0.0);
    EXPECT_EQ(rows[0].std_score, 0.0);
  }
}

TEST(Sweep, MeansStrictlyIncrease) {
  const auto rows = sweep(highway(), four_symbol_catalog(), {0.0, 0.5, 1.0}, 100, 0);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LT(rows[0].mean_score, rows[1].mean_score);
  EXPECT_LT(rows[1].mean_score, rows[2].mean_score);
  EXPECT_LE(rows[2].mean_score, 5.9);
  EXPECT_GT(rows[1].std_score, 0.0);
}

TEST(Sweep, MatchesIndividualTrials) {
  const auto rows = sweep(human_a1(), desk_catalog(), {0.4}, 3, 10);
  double sum = 0.0;
  std::vector<double> values;
  for (std::uint64_t i = 0; i < 3; ++i) {
    PerturbationConfig cfg;
    cfg.substitution_rate = 0.4;
    cfg.seed = 10 + i;
    values.push_back(compute_score(generate_trace(human_a1(), desk_catalog(), cfg), desk_catalog(),
                                   "intersection_A").value);
    sum += values.back();
  }
  const double mean = sum / 3.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  EXPECT_DOUBLE_EQ(rows[0].mean_score, mean);
  EXPECT_DOUBLE_EQ(rows[0].std_score, std::sqrt(ss / 2.0));
}

TEST(Sweep, Errors) {
  EXPECT_EQ(kind_of([] { sweep(highway(), four_symbol_catalog(), {0.5}, 0, 0); }), ErrorKind::PreconditionFailed);
  EXPECT_EQ(kind_of([] { sweep(highway(), four_symbol_catalog(), {1.5}, 1, 0); }), ErrorKind::InvalidConfig);
  EXPECT_TRUE(sweep(highway(), four_symbol_catalog(), {}, 1, 0).empty());
}
