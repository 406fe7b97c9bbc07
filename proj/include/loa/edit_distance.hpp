#pragma once

// Edit-distance family used as the comparison function between observed and
// human reference action sequences.
//
// All kernels are row-compressed: working memory is O(min(|a|, |b|)) cells
// (two rows for Levenshtein, three rows for optimal string alignment). Each
// kernel takes an optional allocator so callers can account for that memory.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <ranges>
#include <string>
#include <utility>
#include <vector>

#include "loa/error.hpp"

namespace loa::edit {

enum class Normalization { MaxLength, SumLength, AlignmentPath };

enum class SubstitutionMode {
  Constant,        // equal symbols cost 0, different symbols cost substitute_cost
  ParameterAware,  // equal symbols cost the normalized subaction difference
};

struct CostModel {
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  double substitute_cost = 1.0;
  double transpose_cost = 1.0;
  bool transpositions_enabled = true;
  SubstitutionMode substitution = SubstitutionMode::Constant;

  static CostModel osa() { return {}; }
  static CostModel levenshtein() {
    CostModel m;
    m.transpositions_enabled = false;
    return m;
  }

  bool is_unit() const {
    return insert_cost == 1.0 && delete_cost == 1.0 && substitute_cost == 1.0 &&
           transpose_cost == 1.0 && substitution == SubstitutionMode::Constant;
  }

  void validate() const {
    auto ok = [](double c) { return std::isfinite(c) && c >= 0.0; };
    if (!ok(insert_cost) || !ok(delete_cost) || !ok(substitute_cost) || !ok(transpose_cost))
      throw Error(ErrorKind::InvalidCostModel, "costs must be finite and non-negative");
  }

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

/// Cost of the cheapest edit script plus the number of alignment columns it
/// uses (a transposition spans two columns). Among equal-cost scripts the
/// longest alignment is reported.
struct Alignment {
  double cost = 0.0;
  std::size_t length = 0;
};

template <class R>
concept Sequence = std::ranges::random_access_range<R> && std::ranges::sized_range<R> &&
                   std::equality_comparable<std::ranges::range_value_t<R>>;

namespace detail {

template <class T, class Alloc>
using rebind_vector =
    std::vector<T, typename std::allocator_traits<Alloc>::template rebind_alloc<T>>;

}  // namespace detail

/// Plain Levenshtein distance (insert, delete, substitute; unit costs).
template <Sequence A, Sequence B, class Alloc = std::allocator<std::size_t>>
std::size_t levenshtein(const A& a, const B& b, const Alloc& alloc = Alloc{}) {
  // Row runs over the shorter operand; the distance is symmetric.
  if (std::ranges::size(a) < std::ranges::size(b)) return levenshtein(b, a, alloc);
  const std::size_t n = std::ranges::size(b);
  if (n == 0) return std::ranges::size(a);

  detail::rebind_vector<std::size_t, Alloc> row(n + 1, 0, alloc);
  for (std::size_t j = 0; j <= n; ++j) row[j] = j;

  std::size_t i = 0;
  for (const auto& ca : a) {
    std::size_t diagonal = row[0];
    row[0] = ++i;
    std::size_t j = 0;
    for (const auto& cb : b) {
      const std::size_t above = row[j + 1];
      const std::size_t sub = diagonal + (ca == cb ? 0 : 1);
      row[j + 1] = std::min({above + 1, row[j] + 1, sub});
      diagonal = above;
      ++j;
    }
  }
  return row[n];
}

/// Optimal string alignment distance: Levenshtein plus adjacent transposition,
/// with no substring edited more than once. This differs from unrestricted
/// Damerau-Levenshtein: osa("ca", "abc") == 3 while the unrestricted distance is 2.
template <Sequence A, Sequence B, class Alloc = std::allocator<std::size_t>>
std::size_t damerau_levenshtein_osa(const A& a, const B& b, const Alloc& alloc = Alloc{}) {
  if (std::ranges::size(a) < std::ranges::size(b)) return damerau_levenshtein_osa(b, a, alloc);
  const std::size_t m = std::ranges::size(a);
  const std::size_t n = std::ranges::size(b);
  if (n == 0) return m;

  auto ai = std::ranges::begin(a);
  auto bi = std::ranges::begin(b);

  // prev2 = row i-2, prev = row i-1, cur = row i.
  detail::rebind_vector<std::size_t, Alloc> prev2(n + 1, 0, alloc);
  detail::rebind_vector<std::size_t, Alloc> prev(n + 1, 0, alloc);
  detail::rebind_vector<std::size_t, Alloc> cur(n + 1, 0, alloc);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = j;

  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = i;
    const auto& ca = ai[i - 1];
    for (std::size_t j = 1; j <= n; ++j) {
      const auto& cb = bi[j - 1];
      std::size_t best = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca == cb ? 0 : 1)});
      if (i > 1 && j > 1 && ca == bi[j - 2] && ai[i - 2] == cb)
        best = std::min(best, prev2[j - 2] + 1);
      cur[j] = best;
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[n];
}

namespace detail {

// Requires m >= n so the rows span the shorter operand.
template <bool TrackLength, class Same, class Substitute, class Alloc>
Alignment weighted_rows(std::size_t m, std::size_t n, const CostModel& model, Same same,
                        Substitute substitute, const Alloc& alloc) {
  if (n == 0) return {static_cast<double>(m) * model.delete_cost, m};

  rebind_vector<double, Alloc> prev2(n + 1, 0.0, alloc);
  rebind_vector<double, Alloc> prev(n + 1, 0.0, alloc);
  rebind_vector<double, Alloc> cur(n + 1, 0.0, alloc);
  using len_vector = rebind_vector<std::size_t, Alloc>;
  len_vector lprev2(TrackLength ? n + 1 : 0, 0, alloc);
  len_vector lprev(TrackLength ? n + 1 : 0, 0, alloc);
  len_vector lcur(TrackLength ? n + 1 : 0, 0, alloc);

  for (std::size_t j = 0; j <= n; ++j) {
    prev[j] = static_cast<double>(j) * model.insert_cost;
    if constexpr (TrackLength) lprev[j] = j;
  }

  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<double>(i) * model.delete_cost;
    if constexpr (TrackLength) lcur[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      double best = prev[j] + model.delete_cost;
      std::size_t best_len = 0;
      if constexpr (TrackLength) best_len = lprev[j] + 1;

      auto consider = [&](double cost, [[maybe_unused]] std::size_t len) {
        if constexpr (TrackLength) {
          if (cost < best || (cost == best && len > best_len)) {
            best = cost;
            best_len = len;
          }
        } else {
          best = std::min(best, cost);
        }
      };

      consider(cur[j - 1] + model.insert_cost, TrackLength ? lcur[j - 1] + 1 : 0);
      consider(prev[j - 1] + substitute(i - 1, j - 1), TrackLength ? lprev[j - 1] + 1 : 0);
      if (model.transpositions_enabled && i > 1 && j > 1 && same(i - 1, j - 2) &&
          same(i - 2, j - 1))
        consider(prev2[j - 2] + model.transpose_cost, TrackLength ? lprev2[j - 2] + 2 : 0);

      cur[j] = best;
      if constexpr (TrackLength) lcur[j] = best_len;
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
    if constexpr (TrackLength) {
      std::swap(lprev2, lprev);
      std::swap(lprev, lcur);
    }
  }
  return {prev[n], TrackLength ? lprev[n] : 0};
}

}  // namespace detail

/// Weighted OSA/Levenshtein over index-addressed operands of length m and n.
///
/// `same(i, j)` reports whether a[i] and b[j] carry the same symbol (drives
/// transposition eligibility); `substitute(i, j)` returns the cost of aligning
/// a[i] with b[j], which must be 0 for identical elements.
template <bool TrackLength = false, class Same, class Substitute,
          class Alloc = std::allocator<double>>
Alignment weighted_alignment_indexed(std::size_t m, std::size_t n, const CostModel& model,
                                     Same same, Substitute substitute,
                                     const Alloc& alloc = Alloc{}) {
  model.validate();
  if (m >= n) return detail::weighted_rows<TrackLength>(m, n, model, same, substitute, alloc);
  // Transform b into a instead: insertions and deletions trade places.
  CostModel flipped = model;
  std::swap(flipped.insert_cost, flipped.delete_cost);
  return detail::weighted_rows<TrackLength>(
      n, m, flipped, [&](std::size_t i, std::size_t j) { return same(j, i); },
      [&](std::size_t i, std::size_t j) { return substitute(j, i); }, alloc);
}

/// Weighted distance between symbol sequences under a constant-substitution model.
template <Sequence A, Sequence B>
double weighted_distance(const A& a, const B& b, const CostModel& model) {
  auto ai = std::ranges::begin(a);
  auto bi = std::ranges::begin(b);
  auto same = [&](std::size_t i, std::size_t j) { return ai[i] == bi[j]; };
  auto sub = [&](std::size_t i, std::size_t j) {
    return ai[i] == bi[j] ? 0.0 : model.substitute_cost;
  };
  return weighted_alignment_indexed(std::ranges::size(a), std::ranges::size(b), model, same, sub)
      .cost;
}

/// Raw distance under `model`, using the integer kernels when costs are unit.
template <Sequence A, Sequence B>
double distance(const A& a, const B& b, const CostModel& model) {
  model.validate();
  if (model.is_unit()) {
    return static_cast<double>(model.transpositions_enabled ? damerau_levenshtein_osa(a, b)
                                                            : levenshtein(a, b));
  }
  return weighted_distance(a, b, model);
}

/// Divides a raw distance by the variant's denominator and clamps to [0, 1].
/// Both operands empty is defined as 0.
inline double normalize(double raw, std::size_t len_a, std::size_t len_b, Normalization variant,
                        std::size_t alignment_length = 0) {
  double denom = 0.0;
  switch (variant) {
    case Normalization::MaxLength: denom = static_cast<double>(std::max(len_a, len_b)); break;
    case Normalization::SumLength: denom = static_cast<double>(len_a + len_b); break;
    case Normalization::AlignmentPath: denom = static_cast<double>(alignment_length); break;
  }
  if (denom == 0.0) return 0.0;
  return std::clamp(raw / denom, 0.0, 1.0);
}

struct NormalizedDistance {
  double raw = 0.0;
  double normalized = 0.0;
};

template <Sequence A, Sequence B>
NormalizedDistance normalized_distance_detail(const A& a, const B& b, Normalization variant,
                                              const CostModel& model = {}) {
  const std::size_t m = std::ranges::size(a);
  const std::size_t n = std::ranges::size(b);
  if (variant == Normalization::AlignmentPath) {
    auto ai = std::ranges::begin(a);
    auto bi = std::ranges::begin(b);
    auto same = [&](std::size_t i, std::size_t j) { return ai[i] == bi[j]; };
    auto sub = [&](std::size_t i, std::size_t j) {
      return ai[i] == bi[j] ? 0.0 : model.substitute_cost;
    };
    const Alignment al = weighted_alignment_indexed<true>(m, n, model, same, sub);
    return {al.cost, normalize(al.cost, m, n, variant, al.length)};
  }
  const double raw = distance(a, b, model);
  return {raw, normalize(raw, m, n, variant)};
}

template <Sequence A, Sequence B>
double normalized_distance(const A& a, const B& b,
                           Normalization variant = Normalization::MaxLength,
                           const CostModel& model = {}) {
  return normalized_distance_detail(a, b, variant, model).normalized;
}

inline constexpr std::size_t kBruteForceMaxLength = 8;

namespace detail {

template <class ItA, class ItB>
void enumerate_scripts(ItA a, std::size_t m, ItB b, std::size_t n, std::size_t i, std::size_t j,
                       double cost, const CostModel& model, double& best) {
  const std::size_t ra = m - i;
  const std::size_t rb = n - j;
  const double floor = ra > rb ? static_cast<double>(ra - rb) * model.delete_cost
                               : static_cast<double>(rb - ra) * model.insert_cost;
  if (cost + floor >= best) return;
  if (ra == 0 && rb == 0) {
    best = cost;
    return;
  }
  if (ra > 0 && rb > 0)
    enumerate_scripts(a, m, b, n, i + 1, j + 1,
                      cost + (a[i] == b[j] ? 0.0 : model.substitute_cost), model, best);
  if (model.transpositions_enabled && ra > 1 && rb > 1 && a[i] == b[j + 1] && a[i + 1] == b[j])
    enumerate_scripts(a, m, b, n, i + 2, j + 2, cost + model.transpose_cost, model, best);
  if (ra > 0) enumerate_scripts(a, m, b, n, i + 1, j, cost + model.delete_cost, model, best);
  if (rb > 0) enumerate_scripts(a, m, b, n, i, j + 1, cost + model.insert_cost, model, best);
}

}  // namespace detail

/// Exhaustive search over every legal edit script (no memoization), walking
/// the operands front to back. Used as a test oracle for the DP kernels.
/// Parameter-aware substitution is not supported; substitution is constant.
template <Sequence A, Sequence B>
double brute_force_distance(const A& a, const B& b, const CostModel& model = {}) {
  model.validate();
  const std::size_t m = std::ranges::size(a);
  const std::size_t n = std::ranges::size(b);
  if (m > kBruteForceMaxLength || n > kBruteForceMaxLength)
    throw Error(ErrorKind::InputTooLarge, "brute force oracle accepts at most " +
                                              std::to_string(kBruteForceMaxLength) + " symbols");
  const std::vector<std::ranges::range_value_t<A>> va(std::ranges::begin(a), std::ranges::end(a));
  const std::vector<std::ranges::range_value_t<B>> vb(std::ranges::begin(b), std::ranges::end(b));
  double best = std::numeric_limits<double>::infinity();
  detail::enumerate_scripts(va.begin(), m, vb.begin(), n, 0, 0, 0.0, model, best);
  return best;
}

}  // namespace loa::edit
