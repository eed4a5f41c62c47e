// vbvarsel/metrics.hpp

// Copyright 2026  The vbvarsel authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef VBVARSEL_METRICS_HPP_
#define VBVARSEL_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vbvarsel/errors.hpp"
#include "vbvarsel/special_functions.hpp"

namespace vbvarsel {

namespace detail {
inline double comb2(double n) { return 0.5 * n * (n - 1.0); }
}  // namespace detail

// Adjusted Rand index between two labelings of the same observations, via the
// contingency-table closed form
//   (sum_ij C(n_ij,2) - E) / (max - E),
//   E = sum_i C(a_i,2) sum_j C(b_j,2) / C(n,2),
//   max = (sum_i C(a_i,2) + sum_j C(b_j,2)) / 2.
// Degenerate pairs where max = E (for example both sides all ties, or both
// all singletons) agree perfectly on every pair and score 1.
inline double adjusted_rand_index(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("labelings have sizes " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  if (a.size() < 2) {
    throw LengthMismatch("need at least two observations");
  }
  std::map<std::pair<int, int>, std::int64_t> cells;
  std::map<int, std::int64_t> row_sums, col_sums;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++cells[{a[i], b[i]}];
    ++row_sums[a[i]];
    ++col_sums[b[i]];
  }
  double pairs_both = 0.0;
  for (const auto& [key, count] : cells) {
    pairs_both += detail::comb2(static_cast<double>(count));
  }
  double pairs_a = 0.0;
  for (const auto& [key, count] : row_sums) {
    pairs_a += detail::comb2(static_cast<double>(count));
  }
  double pairs_b = 0.0;
  for (const auto& [key, count] : col_sums) {
    pairs_b += detail::comb2(static_cast<double>(count));
  }
  const double total = detail::comb2(static_cast<double>(a.size()));
  const double expected = pairs_a * pairs_b / total;
  const double maximum = 0.5 * (pairs_a + pairs_b);
  const double denom = maximum - expected;
  if (denom == 0.0) return 1.0;
  return (pairs_both - expected) / denom;
}

// Fractions of truly relevant covariates that were selected and of truly
// irrelevant covariates that were deselected.  An empty class has no
// mistakes to make and scores 1.
struct SelectionMetrics {
  double relevant_selected = 1.0;
  double irrelevant_deselected = 1.0;
};

inline SelectionMetrics selection_metrics(const std::vector<bool>& selected,
                                          const std::vector<bool>& relevant) {
  if (selected.size() != relevant.size()) {
    throw LengthMismatch("selection masks have sizes " +
                         std::to_string(selected.size()) + " and " +
                         std::to_string(relevant.size()));
  }
  int n_rel = 0, n_rel_sel = 0, n_irr = 0, n_irr_desel = 0;
  for (std::size_t p = 0; p < selected.size(); ++p) {
    if (relevant[p]) {
      ++n_rel;
      if (selected[p]) ++n_rel_sel;
    } else {
      ++n_irr;
      if (!selected[p]) ++n_irr_desel;
    }
  }
  SelectionMetrics out;
  if (n_rel > 0) out.relevant_selected = static_cast<double>(n_rel_sel) / n_rel;
  if (n_irr > 0) {
    out.irrelevant_deselected = static_cast<double>(n_irr_desel) / n_irr;
  }
  return out;
}

// One-sided enrichment p-value: with `selected_total` draws from a universe
// of size `universe` containing a distinguished set of size `set_size`, the
// probability of hitting the set at least `overlap` times,
//   P(X >= overlap),  X ~ Hypergeometric(universe, set_size, selected_total),
// evaluated in log space.
inline double fisher_enrichment(int overlap, int set_size, int selected_total,
                                int universe) {
  if (universe < 0 || set_size < 0 || selected_total < 0 || overlap < 0 ||
      set_size > universe || selected_total > universe ||
      overlap > set_size || overlap > selected_total) {
    throw InvalidCounts("enrichment counts violate their bounds");
  }
  const double log_denom =
      log_choose(static_cast<double>(universe),
                 static_cast<double>(selected_total));
  const int hi = std::min(set_size, selected_total);
  const int lo = std::max(overlap, set_size + selected_total - universe);
  double p = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double log_term =
        log_choose(static_cast<double>(set_size), static_cast<double>(i)) +
        log_choose(static_cast<double>(universe - set_size),
                   static_cast<double>(selected_total - i)) -
        log_denom;
    p += std::exp(log_term);
  }
  return std::min(p, 1.0);
}

// Lower quartile, median, upper quartile with linear interpolation between
// order statistics: the q-quantile sits at fractional index (n - 1) q.
struct Quartiles {
  double lower = std::numeric_limits<double>::quiet_NaN();
  double median = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
};

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) {
    throw LengthMismatch("quartiles of an empty sample");
  }
  std::sort(values.begin(), values.end());
  Quartiles out;
  out.lower = quantile_sorted(values, 0.25);
  out.median = quantile_sorted(values, 0.5);
  out.upper = quantile_sorted(values, 0.75);
  return out;
}

// --- per-repetition bookkeeping ----------------------------------------------

struct RepetitionRecord {
  int repetition = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;

  double ari = std::numeric_limits<double>::quiet_NaN();
  double relevant_selected = std::numeric_limits<double>::quiet_NaN();
  double irrelevant_deselected = std::numeric_limits<double>::quiet_NaN();
  double enrichment_p = std::numeric_limits<double>::quiet_NaN();
  int n_selected = 0;
  int effective_k = 0;
  int iterations = 0;
  bool converged = false;
  bool elbo_decreased = false;
  double final_elbo = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
};

struct MetricQuartiles {
  int count = 0;  // successful repetitions contributing a value
  Quartiles q;
};

struct RepetitionSummary {
  int repetitions = 0;
  int failures = 0;
  MetricQuartiles ari;
  MetricQuartiles relevant_selected;
  MetricQuartiles irrelevant_deselected;
  MetricQuartiles n_selected;
  MetricQuartiles effective_k;
  MetricQuartiles iterations;
  MetricQuartiles seconds;
};

// Quartiles of every metric over the successful repetitions; failed runs are
// counted but contribute no values, and missing metrics (NaN, for instance
// when no ground truth was supplied) are skipped.
inline RepetitionSummary aggregate(const std::vector<RepetitionRecord>& records) {
  RepetitionSummary s;
  s.repetitions = static_cast<int>(records.size());
  auto collect = [&](auto getter) {
    std::vector<double> values;
    for (const RepetitionRecord& r : records) {
      if (r.failed) continue;
      const double v = getter(r);
      if (std::isnan(v)) continue;
      values.push_back(v);
    }
    MetricQuartiles mq;
    mq.count = static_cast<int>(values.size());
    if (!values.empty()) mq.q = quartiles(std::move(values));
    return mq;
  };
  for (const RepetitionRecord& r : records) {
    if (r.failed) ++s.failures;
  }
  s.ari = collect([](const RepetitionRecord& r) { return r.ari; });
  s.relevant_selected =
      collect([](const RepetitionRecord& r) { return r.relevant_selected; });
  s.irrelevant_deselected = collect(
      [](const RepetitionRecord& r) { return r.irrelevant_deselected; });
  s.n_selected = collect(
      [](const RepetitionRecord& r) { return static_cast<double>(r.n_selected); });
  s.effective_k = collect(
      [](const RepetitionRecord& r) { return static_cast<double>(r.effective_k); });
  s.iterations = collect(
      [](const RepetitionRecord& r) { return static_cast<double>(r.iterations); });
  s.seconds = collect([](const RepetitionRecord& r) { return r.seconds; });
  return s;
}

}  // namespace vbvarsel

#endif  // VBVARSEL_METRICS_HPP_
