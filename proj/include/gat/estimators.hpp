#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "gat/acquisition.hpp"
#include "gat/errors.hpp"

namespace gat {

enum class Estimator {
  FullEmpirical,
  SubsetMean,
  Lure,
  BiasedClusterMean,
};

inline const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::FullEmpirical: return "full_empirical";
    case Estimator::SubsetMean: return "subset_mean";
    case Estimator::Lure: return "lure";
    case Estimator::BiasedClusterMean: return "biased_mean";
  }
  return "unknown";
}

inline Estimator parse_estimator(std::string_view token) {
  if (token == "full_empirical") return Estimator::FullEmpirical;
  if (token == "subset_mean") return Estimator::SubsetMean;
  if (token == "lure") return Estimator::Lure;
  if (token == "biased_mean") return Estimator::BiasedClusterMean;
  fail(Errc::BadConfig, "unknown estimator '" + std::string(token) + "'");
}

struct RiskEstimate {
  Estimator estimator = Estimator::Lure;
  std::size_t budget = 0;  // number of labeled samples used
  double value = 0.0;
};

// Mean loss over the whole pool: the ground truth the estimators target.
inline double empirical_risk(std::span<const double> losses) {
  if (losses.empty()) fail(Errc::EmptyPool, "no losses");
  double acc = 0.0;
  for (double l : losses) acc += l;
  return acc / static_cast<double>(losses.size());
}

// Mean loss over a labeled subset, with no correction for how the subset
// was chosen. Biased whenever acquisition is non-uniform.
inline double subset_risk(std::span<const double> subset_losses) {
  if (subset_losses.empty()) fail(Errc::EmptySubset, "no labeled losses");
  double acc = 0.0;
  for (double l : subset_losses) acc += l;
  return acc / static_cast<double>(subset_losses.size());
}

// Debiased risk estimate from an acquisition prefix. Each labeled loss is
// reweighted by
//
//   v_m = 1 + (N - M) / (N - m) * (1 / ((N - m + 1) * q_m) - 1)
//
// where N is the pool size, M the prefix length, m the 1-based step and q_m
// the recorded inclusion probability of that step's pick among the samples
// still unlabeled. The weights make the estimate unbiased for the pool mean
// under any full-support acquisition PMF; under uniform acquisition
// (q_m = 1/(N-m+1)) every v_m is 1 and the subset mean is recovered, and at
// M = N the estimate equals the pool empirical risk for any trace. Weights
// are used exactly as the formula gives them, with no clipping.
inline RiskEstimate lure_estimate(std::span<const AcquisitionStep> steps,
                                  std::span<const double> pool_losses,
                                  std::size_t pool_size) {
  const std::size_t M = steps.size();
  const std::size_t N = pool_size;
  if (M == 0) fail(Errc::EmptySubset, "empty acquisition prefix");
  if (M > N) fail(Errc::BudgetExceedsPool, "prefix longer than pool");
  if (pool_losses.size() != N)
    fail(Errc::DimensionMismatch, "losses length differs from pool size");

  double acc = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const auto& s = steps[j];
    const double m = static_cast<double>(j + 1);
    const double q = s.acq_prob;
    if (!(q > 0.0) || q > 1.0 + 1e-12)
      fail(Errc::BadProbability,
           "acquisition probability at step " + std::to_string(j + 1) +
               " outside (0, 1]");
    if (s.sample_index >= N)
      fail(Errc::DimensionMismatch, "sample index outside pool");
    double v = 1.0;
    const double nd = static_cast<double>(N);
    if (static_cast<std::size_t>(m) != N) {
      v += (nd - static_cast<double>(M)) / (nd - m) *
           (1.0 / ((nd - m + 1.0) * q) - 1.0);
    }
    acc += v * pool_losses[s.sample_index];
  }
  return {Estimator::Lure, M, acc / static_cast<double>(M)};
}

// Plain mean over the acquired prefix, tagged as the biased baseline. Under
// cluster or uncertainty acquisition this systematically over-represents
// high-utility samples; it exists as the comparison point the debiased
// estimate is judged against.
inline RiskEstimate biased_mean_estimate(std::span<const AcquisitionStep> steps,
                                         std::span<const double> pool_losses) {
  if (steps.empty()) fail(Errc::EmptySubset, "empty acquisition prefix");
  double acc = 0.0;
  for (const auto& s : steps) {
    if (s.sample_index >= pool_losses.size())
      fail(Errc::DimensionMismatch, "sample index outside pool");
    acc += pool_losses[s.sample_index];
  }
  return {Estimator::BiasedClusterMean, steps.size(),
          acc / static_cast<double>(steps.size())};
}

}  // namespace gat
