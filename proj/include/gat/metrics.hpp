#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "gat/errors.hpp"

namespace gat {

// Squared-error curve of a risk estimator across a budget grid, aggregated
// over repeated runs.
struct ErrorCurve {
  std::vector<double> budgets;        // strictly increasing grid
  std::vector<double> mean_sq_error;  // mean (estimate - truth)^2 per budget
  std::vector<double> run_variance;   // across-run sample variance (n-1)
  std::size_t runs = 0;
};

// estimates_by_run[r][b] is run r's estimate at budget b.
inline ErrorCurve estimation_error_curve(
    const std::vector<std::vector<double>>& estimates_by_run,
    std::span<const double> budgets, double true_risk) {
  if (estimates_by_run.empty()) fail(Errc::EmptyInput, "no runs");
  const std::size_t B = budgets.size();
  if (B == 0) fail(Errc::GridMismatch, "empty budget grid");
  for (std::size_t b = 1; b < B; ++b)
    if (!(budgets[b] > budgets[b - 1]))
      fail(Errc::GridMismatch, "budget grid must increase strictly");
  for (const auto& row : estimates_by_run)
    if (row.size() != B)
      fail(Errc::GridMismatch, "run length differs from budget grid");

  const std::size_t R = estimates_by_run.size();
  ErrorCurve curve;
  curve.budgets.assign(budgets.begin(), budgets.end());
  curve.mean_sq_error.resize(B);
  curve.run_variance.resize(B);
  curve.runs = R;
  for (std::size_t b = 0; b < B; ++b) {
    double se = 0.0, mean = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      const double d = estimates_by_run[r][b] - true_risk;
      se += d * d;
      mean += estimates_by_run[r][b];
    }
    curve.mean_sq_error[b] = se / static_cast<double>(R);
    mean /= static_cast<double>(R);
    double var = 0.0;
    if (R > 1) {
      for (std::size_t r = 0; r < R; ++r) {
        const double d = estimates_by_run[r][b] - mean;
        var += d * d;
      }
      var /= static_cast<double>(R - 1);
    }
    curve.run_variance[b] = var;
  }
  return curve;
}

// Trapezoid area under the error curve, normalized by the budget span so
// curves over different grids compare directly. A constant curve of height
// h has AUC exactly h.
inline double auc_trapezoid(const ErrorCurve& curve) {
  const std::size_t B = curve.budgets.size();
  if (B < 2) fail(Errc::TooFewPoints, "auc needs at least 2 grid points");
  double area = 0.0;
  for (std::size_t b = 1; b < B; ++b)
    area += 0.5 * (curve.mean_sq_error[b] + curve.mean_sq_error[b - 1]) *
            (curve.budgets[b] - curve.budgets[b - 1]);
  return area / (curve.budgets.back() - curve.budgets.front());
}

// One scored sample for the selective-uncertainty metric.
struct ConfRecord {
  double confidence;   // max class probability
  double uncertainty;  // predictive entropy
  bool is_error;       // argmax != gold
};

// AUROC of `uncertainty` as a misprediction detector, restricted to samples
// the model is confident about (confidence >= threshold). Mann-Whitney with
// half credit for ties, computed through midranks; equal to the all-pairs
// count for any input.
inline double conditional_auroc(std::span<const ConfRecord> records,
                                double threshold = 0.7) {
  std::vector<std::pair<double, bool>> kept;
  for (const auto& r : records)
    if (r.confidence >= threshold) kept.push_back({r.uncertainty, r.is_error});
  std::size_t pos = 0;
  for (const auto& [u, e] : kept) pos += e ? 1 : 0;
  const std::size_t neg = kept.size() - pos;
  if (pos == 0 || neg == 0)
    fail(Errc::DegenerateSubset,
         "confident subset needs both errors and non-errors");

  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < kept.size()) {
    std::size_t j = i;
    while (j < kept.size() && kept[j].first == kept[i].first) ++j;
    // midrank of the tie block [i, j), 1-based ranks
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t)
      if (kept[t].second) rank_sum_pos += midrank;
    i = j;
  }
  const double u_stat =
      rank_sum_pos -
      static_cast<double>(pos) * static_cast<double>(pos + 1) / 2.0;
  return u_stat / (static_cast<double>(pos) * static_cast<double>(neg));
}

// Share of correct predictions implied by 0/1 losses.
inline double accuracy(std::span<const double> losses) {
  if (losses.empty()) fail(Errc::EmptyPool, "no losses");
  double acc = 0.0;
  for (double l : losses) acc += l;
  return 1.0 - acc / static_cast<double>(losses.size());
}

// Population standard deviation of per-sample entropies.
inline double entropy_sigma(std::span<const double> entropies) {
  if (entropies.empty()) fail(Errc::EmptyPool, "no entropies");
  const double n = static_cast<double>(entropies.size());
  double mean = 0.0;
  for (double e : entropies) mean += e;
  mean /= n;
  double var = 0.0;
  for (double e : entropies) var += (e - mean) * (e - mean);
  return std::sqrt(var / n);
}

// Geometric mean of strictly positive values, via the mean log.
inline double geometric_mean(std::span<const double> values) {
  if (values.empty()) fail(Errc::EmptyInput, "no values");
  double acc = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) fail(Errc::NonPositive, "geometric mean needs values > 0");
    acc += std::log(v);
  }
  return std::exp(acc / static_cast<double>(values.size()));
}

// Relative improvement of `best` over `baseline`, in percent.
inline double performance_gain(double baseline, double best) {
  if (!(baseline > 0.0)) fail(Errc::NonPositive, "baseline must be > 0");
  return (baseline - best) / baseline * 100.0;
}

}  // namespace gat
