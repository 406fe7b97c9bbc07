#pragma once

// Shared fixtures and test-only oracles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "loa/catalog.hpp"
#include "loa/trace.hpp"

#ifndef LOA_DATA_DIR
#error "LOA_DATA_DIR must point at the data/ directory"
#endif

namespace loa::test {

inline std::string data_path(const std::string& name) { return std::string(LOA_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Three actions (turn_left L, turn_right R, straight S); references
/// human_A1 = LSRS in intersection_A and human_B1 = RLRS in roundabout_B.
/// Parameter ranges are invented fixture values.
inline const BehaviorCatalog& desk_catalog() {
  static const BehaviorCatalog cat = [] {
    std::ifstream f(data_path("desk_catalog.json"));
    return load_catalog(f);
  }();
  return cat;
}

/// Builds a trace from single-character symbols, one second apart.
inline Trace make_trace(const std::string& scenario, const std::string& symbols) {
  Trace t;
  t.scenario = scenario;
  double when = 0.0;
  for (char c : symbols) t.steps.push_back(TraceStep{when++, std::string(1, c), {}});
  return t;
}

/// Four-symbol catalog: scenario "highway" holds a 50-step reference over all
/// four symbols; scenario "merge" holds a 6-step reference using only A and B.
inline const BehaviorCatalog& four_symbol_catalog() {
  static const BehaviorCatalog cat = [] {
    std::vector<ActionDef> actions;
    const char* names[] = {"accelerate", "brake", "turn_left", "turn_right"};
    const char* symbols[] = {"A", "B", "L", "R"};
    for (int i = 0; i < 4; ++i)
      actions.push_back(ActionDef{names[i], symbols[i], {SubactionSchema{"magnitude", "u", 0.0, 10.0}}});

    std::mt19937_64 rng(20240601);
    ReferenceTrace highway{"highway_50", "highway", {}};
    for (int k = 0; k < 50; ++k) {
      const auto pick = static_cast<std::size_t>(rng() % 4);
      highway.steps.push_back(TraceStep{0.5 * k, symbols[pick], {{"magnitude", static_cast<double>(rng() % 11)}}});
    }
    ReferenceTrace merge{"merge_AB", "merge", {}};
    const std::string pattern = "ABABBA";
    for (std::size_t k = 0; k < pattern.size(); ++k)
      merge.steps.push_back(TraceStep{static_cast<double>(k), std::string(1, pattern[k]), {{"magnitude", 5.0}}});
    return BehaviorCatalog::create("1", std::move(actions), {highway, merge});
  }();
  return cat;
}

/// All strings over `alphabet` with length in [0, max_len].
inline std::vector<std::string> all_strings(const std::string& alphabet, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : alphabet) out.push_back(out[i] + c);
    begin = end;
  }
  return out;
}

inline std::string random_string(std::mt19937_64& rng, std::size_t max_len, std::size_t alphabet) {
  std::string s(rng() % (max_len + 1), 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % alphabet);
  return s;
}

/// Shortest path from `a` to `b` in the graph whose vertices are strings and
/// whose unit-cost edges are single insertions, deletions and substitutions
/// (plus adjacent swaps when `swaps` is set). With swaps this is the
/// unrestricted Damerau-Levenshtein distance, not OSA. Exponential; small
/// inputs only.
inline std::size_t graph_distance(const std::string& a, const std::string& b, bool swaps) {
  std::set<char> letters(a.begin(), a.end());
  letters.insert(b.begin(), b.end());
  const std::size_t max_len = std::max(a.size(), b.size()) + 1;

  std::unordered_map<std::string, std::size_t> dist{{a, 0}};
  std::deque<std::string> queue{a};
  while (!queue.empty()) {
    const std::string s = queue.front();
    queue.pop_front();
    const std::size_t d = dist[s];
    if (s == b) return d;
    auto visit = [&](std::string next) {
      if (next.size() > max_len) return;
      if (dist.emplace(next, d + 1).second) queue.push_back(std::move(next));
    };
    for (std::size_t i = 0; i <= s.size(); ++i)
      for (char c : letters) visit(s.substr(0, i) + c + s.substr(i));
    for (std::size_t i = 0; i < s.size(); ++i) {
      visit(s.substr(0, i) + s.substr(i + 1));
      for (char c : letters)
        if (c != s[i]) {
          std::string t = s;
          t[i] = c;
          visit(std::move(t));
        }
      if (swaps && i + 1 < s.size() && s[i] != s[i + 1]) {
        std::string t = s;
        std::swap(t[i], t[i + 1]);
        visit(std::move(t));
      }
    }
  }
  return std::numeric_limits<std::size_t>::max();
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Allocator that records the peak number of bytes live at once.
struct AllocationStats {
  std::size_t live = 0;
  std::size_t peak = 0;
};

template <class T>
struct CountingAllocator {
  using value_type = T;
  AllocationStats* stats;

  explicit CountingAllocator(AllocationStats* s) : stats(s) {}
  template <class U>
  CountingAllocator(const CountingAllocator<U>& other) : stats(other.stats) {}

  T* allocate(std::size_t n) {
    stats->live += n * sizeof(T);
    stats->peak = std::max(stats->peak, stats->live);
    return std::allocator<T>{}.allocate(n);
  }
  void deallocate(T* p, std::size_t n) {
    stats->live -= n * sizeof(T);
    std::allocator<T>{}.deallocate(p, n);
  }
  template <class U>
  bool operator==(const CountingAllocator<U>& o) const { return stats == o.stats; }
};

}  // namespace loa::test
