#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gat/errors.hpp"

namespace gat {

// Mass-sum tolerance accepted by the ProbVector constructor. Anything
// further from 1 must go through normalize() first.
inline constexpr double kMassTolerance = 1e-9;

// Floor applied to a probability before it enters a logarithm. Only the log
// argument is floored; the distribution itself is never modified.
inline constexpr double kLogFloor = 1e-12;

// A validated discrete distribution: length >= 2, entries finite and
// non-negative, mass within kMassTolerance of 1. All information measures
// below work in nats.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
    check(probs_);
  }

  static ProbVector uniform(std::size_t k) {
    if (k < 2) fail(Errc::TooShort, "uniform distribution needs k >= 2");
    ProbVector p;
    p.probs_.assign(k, 1.0 / static_cast<double>(k));
    return p;
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& values() const noexcept { return probs_; }
  auto begin() const noexcept { return probs_.begin(); }
  auto end() const noexcept { return probs_.end(); }

  friend bool operator==(const ProbVector& a, const ProbVector& b) = default;

 private:
  ProbVector() = default;

  static void check(const std::vector<double>& p) {
    if (p.size() < 2) fail(Errc::TooShort, "distribution needs length >= 2");
    double sum = 0.0;
    for (double v : p) {
      if (!std::isfinite(v)) fail(Errc::NonFinite, "non-finite probability");
      if (v < 0.0) fail(Errc::NonFinite, "negative probability");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kMassTolerance)
      fail(Errc::BadProbability,
           "probability mass " + std::to_string(sum) + " outside tolerance");
  }

  std::vector<double> probs_;
};

// Proportional normalization of raw non-negative scores.
inline ProbVector normalize(std::span<const double> raw) {
  if (raw.size() < 2) fail(Errc::TooShort, "need at least 2 entries");
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v)) fail(Errc::NonFinite, "non-finite entry");
    if (v < 0.0) fail(Errc::NonFinite, "negative entry");
    sum += v;
  }
  if (sum == 0.0) fail(Errc::ZeroMass, "raw scores sum to zero");
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / sum;
  return ProbVector(std::move(out));
}

inline ProbVector normalize(const std::vector<double>& raw) {
  return normalize(std::span<const double>(raw));
}

// Shannon entropy in nats; 0 * log 0 taken as 0.
inline double shannon_entropy(const ProbVector& p) {
  double acc = 0.0;
  for (double v : p)
    if (v > 0.0) acc += v * std::log(v);
  return acc == 0.0 ? 0.0 : -acc;
}

// Cross entropy H(target, pred) = -sum target_i * log pred_i, in nats.
// With floor_logs (the default) pred entries are floored at kLogFloor inside
// the log, keeping the result finite. With flooring disabled, a hard zero in
// pred under positive target mass is an error rather than a silent inf.
inline double cross_entropy(const ProbVector& target, const ProbVector& pred,
                            bool floor_logs = true) {
  if (target.size() != pred.size())
    fail(Errc::DimensionMismatch, "cross_entropy operands differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 0.0) continue;
    double q = pred[i];
    if (q <= 0.0) {
      if (!floor_logs)
        fail(Errc::InfiniteResult,
             "pred has zero mass where target is positive");
      q = kLogFloor;
    } else if (floor_logs && q < kLogFloor) {
      q = kLogFloor;
    }
    acc += target[i] * std::log(q);
  }
  return acc == 0.0 ? 0.0 : -acc;
}

// KL divergence D(p || q) in nats; terms with p_i = 0 contribute 0, and q
// is floored at kLogFloor inside the log so the result stays finite.
inline double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size())
    fail(Errc::DimensionMismatch, "kl_divergence operands differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    acc += p[i] * std::log(p[i] / std::max(q[i], kLogFloor));
  }
  return std::max(acc, 0.0);
}

// Jensen-Shannon divergence with midpoint M = (p+q)/2; bounded by ln 2.
// The midpoint is formed elementwise before either KL term, so the result
// is bitwise symmetric in its arguments.
inline double jensen_shannon(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size())
    fail(Errc::DimensionMismatch, "jensen_shannon operands differ in length");
  std::vector<double> mid(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) mid[i] = 0.5 * (p[i] + q[i]);
  ProbVector m(std::move(mid));
  return 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m);
}

// Three-way Jensen-Shannon divergence with equal weights and midpoint
// M = (p+q+u)/3; bounded by ln 3.
inline double jensen_shannon3(const ProbVector& p, const ProbVector& q,
                              const ProbVector& u) {
  if (p.size() != q.size() || p.size() != u.size())
    fail(Errc::DimensionMismatch, "jensen_shannon3 operands differ in length");
  std::vector<double> mid(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    mid[i] = (p[i] + q[i] + u[i]) / 3.0;
  ProbVector m(std::move(mid));
  return (kl_divergence(p, m) + kl_divergence(q, m) + kl_divergence(u, m)) /
         3.0;
}

// Blend of a distribution with the uniform one: w1 * q + w2 / K per entry.
// Weights must be non-negative and sum to 1 within kMassTolerance.
inline ProbVector mix_with_uniform(const ProbVector& q, double w1, double w2) {
  if (!std::isfinite(w1) || !std::isfinite(w2) || w1 < 0.0 || w2 < 0.0 ||
      std::fabs(w1 + w2 - 1.0) > kMassTolerance)
    fail(Errc::BadWeights, "mixture weights must be >= 0 and sum to 1");
  const double unif = w2 / static_cast<double>(q.size());
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = w1 * q[i] + unif;
  return ProbVector(std::move(out));
}

// Variance of the surprisal -ln p_i under p itself. Zero for uniform and
// for point masses.
inline double varentropy(const ProbVector& p) {
  double mean = 0.0, second = 0.0;
  for (double v : p) {
    if (v <= 0.0) continue;
    double s = -std::log(v);
    mean += v * s;
    second += v * s * s;
  }
  return std::max(second - mean * mean, 0.0);
}

// Largest probability; the usual confidence proxy.
inline double max_prob(const ProbVector& p) {
  return *std::max_element(p.begin(), p.end());
}

// Index of the largest probability; ties resolve to the lowest index.
inline std::size_t argmax_index(const ProbVector& p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = i;
  return best;
}

}  // namespace gat
