#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "gat/acquisition.hpp"
#include "gat/errors.hpp"
#include "gat/prob.hpp"
#include "gat/rng.hpp"

namespace gat {

struct ClusterAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> cluster_of;  // cluster id per pool index
  std::vector<std::size_t> sizes;       // member count per cluster
  std::size_t iterations = 0;           // k-means iterations actually run
};

inline std::size_t default_cluster_count(std::size_t pool_size) {
  return static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(pool_size))));
}

namespace detail {

inline std::vector<std::vector<double>> l2_normalized(
    std::span<const std::vector<double>> embeddings) {
  std::vector<std::vector<double>> out(embeddings.begin(), embeddings.end());
  for (auto& e : out) {
    double norm = 0.0;
    for (double v : e) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : e) v /= norm;
  }
  return out;
}

inline double sq_dist(const std::vector<double>& a,
                      const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace detail

// Size-balanced k-means on L2-normalized embeddings.
//
// Assignment works under hard capacities: every cluster holds floor(N/k)
// members, and the N mod k leftover slots form a shared pool consumed by
// whichever clusters fill up first. That pins every size to floor or
// floor+1, i.e. max size - min size <= 1 after every iteration. Points are
// assigned greedily in descending margin (second-best distance minus best
// distance) order, so the points that care most about their placement pick
// first. All ties break toward the lower index; the seed only drives the
// choice of initial centroids.
inline ClusterAssignment balanced_kmeans(
    std::span<const std::vector<double>> embeddings, std::size_t k,
    std::uint64_t seed, std::size_t max_iters = 100) {
  const std::size_t n = embeddings.size();
  if (n == 0) fail(Errc::EmptyInput, "no embeddings");
  if (k < 1 || k > n)
    fail(Errc::BadK, "k must lie in [1, " + std::to_string(n) + "]");
  const std::size_t dim = embeddings[0].size();
  if (dim == 0) fail(Errc::EmptyInput, "zero-dimensional embeddings");
  for (const auto& e : embeddings) {
    if (e.size() != dim)
      fail(Errc::DimensionMismatch, "embeddings differ in dimension");
    for (double v : e)
      if (!std::isfinite(v)) fail(Errc::NonFinite, "non-finite embedding");
  }

  auto points = detail::l2_normalized(embeddings);

  // seeded draw of k distinct starting centroids
  SplitMix64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.next_below(n - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::vector<double>> centroids(k);
  for (std::size_t c = 0; c < k; ++c) centroids[c] = points[order[c]];

  const std::size_t base = n / k;
  const std::size_t extras = n % k;

  ClusterAssignment result;
  result.k = k;
  result.cluster_of.assign(n, 0);
  result.sizes.assign(k, 0);

  std::vector<std::size_t> prev(n, n);  // sentinel: differs from any cluster
  std::vector<double> dist(k);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    // margin-ordered greedy assignment under capacities
    std::vector<std::pair<double, std::size_t>> by_margin(n);
    std::vector<std::vector<double>> dists(n, std::vector<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      double second = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        dists[i][c] = detail::sq_dist(points[i], centroids[c]);
        if (dists[i][c] < best) {
          second = best;
          best = dists[i][c];
        } else if (dists[i][c] < second) {
          second = dists[i][c];
        }
      }
      by_margin[i] = {k == 1 ? 0.0 : second - best, i};
    }
    std::sort(by_margin.begin(), by_margin.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });

    std::fill(result.sizes.begin(), result.sizes.end(), 0);
    std::size_t extras_left = extras;
    for (const auto& [margin, i] : by_margin) {
      (void)margin;
      std::size_t pick = k;
      double pick_dist = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const bool open = result.sizes[c] < base ||
                          (result.sizes[c] == base && extras_left > 0);
        if (open && dists[i][c] < pick_dist) {
          pick_dist = dists[i][c];
          pick = c;
        }
      }
      result.cluster_of[i] = pick;
      if (++result.sizes[pick] == base + 1) --extras_left;
    }

    result.iterations = iter + 1;
    if (result.cluster_of == prev) break;
    prev = result.cluster_of;

    // recompute centroids; capacities guarantee no cluster is empty
    for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = centroids[result.cluster_of[i]];
      for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t d = 0; d < dim; ++d)
        centroids[c][d] /= static_cast<double>(result.sizes[c]);
  }
  return result;
}

// One two-stage pick: a cluster uniformly among those with unlabeled
// members, then a member by the entropy-derived local PMF. Returns the
// chosen pool index and its overall inclusion probability
// P(x) = P(x | cluster) * P(cluster), which sums to 1 over all remaining
// samples and is recorded as the trace's q_m.
//
// When a single cluster remains valid no uniform variate is drawn for the
// cluster stage, keeping the stream one-draw-per-step; with k = 1 this makes
// the sampler replay the flat entropy sampler on the same seed.
inline std::pair<std::size_t, double> cluster_acquire_step(
    const ClusterAssignment& assignment, const std::vector<bool>& alive,
    std::span<const double> entropies, SplitMix64& rng,
    const AcqConfig& cfg = {}) {
  const std::size_t n = assignment.cluster_of.size();
  std::vector<char> cluster_valid(assignment.k, 0);
  std::size_t valid_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i] && !cluster_valid[assignment.cluster_of[i]]) {
      cluster_valid[assignment.cluster_of[i]] = 1;
      ++valid_count;
    }
  }
  if (valid_count == 0) fail(Errc::Exhausted, "no unlabeled samples left");

  std::size_t chosen_cluster = 0;
  if (valid_count == 1) {
    while (!cluster_valid[chosen_cluster]) ++chosen_cluster;
  } else {
    std::size_t pick = rng.next_below(valid_count);
    for (std::size_t c = 0, seen = 0; c < assignment.k; ++c) {
      if (!cluster_valid[c]) continue;
      if (seen++ == pick) {
        chosen_cluster = c;
        break;
      }
    }
  }
  const double cluster_prob = 1.0 / static_cast<double>(valid_count);

  std::vector<std::size_t> members;
  std::vector<double> member_entropy;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i] && assignment.cluster_of[i] == chosen_cluster) {
      members.push_back(i);
      member_entropy.push_back(entropies[i]);
    }
  }
  auto local_pmf = utilities_to_pmf(member_entropy, cfg);

  const double target = rng.next_double();
  double cum = 0.0;
  std::size_t pos = members.size() - 1;
  for (std::size_t j = 0; j < members.size(); ++j) {
    cum += local_pmf[j];
    if (cum > target) {
      pos = j;
      break;
    }
  }
  return {members[pos], local_pmf[pos] * cluster_prob};
}

// Full cluster-based acquisition run: `budget` distinct samples with their
// inclusion probabilities, in pick order.
inline AcquisitionTrace cluster_acquire(const ClusterAssignment& assignment,
                                        std::span<const double> entropies,
                                        std::size_t budget, std::uint64_t seed,
                                        const AcqConfig& cfg = {}) {
  const std::size_t n = assignment.cluster_of.size();
  if (entropies.size() != n)
    fail(Errc::DimensionMismatch, "entropies length differs from pool");
  if (budget < 1 || budget > n)
    fail(Errc::BudgetExceedsPool,
         "budget " + std::to_string(budget) + " outside [1, " +
             std::to_string(n) + "]");

  AcquisitionTrace trace{AcqFunction::LmCluster, seed, n, {}};
  trace.steps.reserve(budget);
  SplitMix64 rng(seed);
  std::vector<bool> alive(n, true);
  for (std::size_t m = 1; m <= budget; ++m) {
    auto [idx, q] = cluster_acquire_step(assignment, alive, entropies, rng, cfg);
    trace.steps.push_back({m, idx, q, entropies[idx]});
    alive[idx] = false;
  }
  return trace;
}

}  // namespace gat
