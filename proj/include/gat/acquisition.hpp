#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gat/errors.hpp"
#include "gat/prob.hpp"
#include "gat/rng.hpp"

namespace gat {

// The acquisition family. Names follow which auxiliary distribution scores
// a candidate against the main model's output: the surrogate model, the
// uniform distribution, or their blend; paired with either cross entropy or
// Jensen-Shannon divergence. SelfEntropy and Ucb need only the main model,
// Random scores everything alike, and LmCluster is the two-stage sampler in
// cluster.hpp.
enum class AcqFunction {
  Random,
  SelfEntropy,
  Ucb,
  MultiLmCe,
  UniformLmCe,
  MultiLmUniformCe,
  MultiLmJsd,
  UniformLmJsd,
  MultiLmUniformJsd,
  LmCluster,
};

inline const char* to_string(AcqFunction f) {
  switch (f) {
    case AcqFunction::Random: return "random";
    case AcqFunction::SelfEntropy: return "self_entropy";
    case AcqFunction::Ucb: return "ucb";
    case AcqFunction::MultiLmCe: return "multilm_ce";
    case AcqFunction::UniformLmCe: return "uniformlm_ce";
    case AcqFunction::MultiLmUniformCe: return "multilm_uniform_ce";
    case AcqFunction::MultiLmJsd: return "multilm_jsd";
    case AcqFunction::UniformLmJsd: return "uniformlm_jsd";
    case AcqFunction::MultiLmUniformJsd: return "multilm_uniform_jsd";
    case AcqFunction::LmCluster: return "lmcluster";
  }
  return "unknown";
}

inline AcqFunction parse_acq_function(std::string_view token) {
  if (token == "random") return AcqFunction::Random;
  if (token == "self_entropy") return AcqFunction::SelfEntropy;
  if (token == "ucb") return AcqFunction::Ucb;
  if (token == "multilm_ce") return AcqFunction::MultiLmCe;
  if (token == "uniformlm_ce") return AcqFunction::UniformLmCe;
  if (token == "multilm_uniform_ce") return AcqFunction::MultiLmUniformCe;
  if (token == "multilm_jsd") return AcqFunction::MultiLmJsd;
  if (token == "uniformlm_jsd") return AcqFunction::UniformLmJsd;
  if (token == "multilm_uniform_jsd") return AcqFunction::MultiLmUniformJsd;
  if (token == "lmcluster") return AcqFunction::LmCluster;
  fail(Errc::BadConfig, "unknown acquisition function '" + std::string(token) + "'");
}

inline bool needs_surrogate(AcqFunction f) {
  switch (f) {
    case AcqFunction::MultiLmCe:
    case AcqFunction::MultiLmUniformCe:
    case AcqFunction::MultiLmJsd:
    case AcqFunction::MultiLmUniformJsd:
      return true;
    default:
      return false;
  }
}

struct AcqConfig {
  AcqFunction function = AcqFunction::Random;
  // blend weights for the *_uniform variants
  double w1 = 0.5;
  double w2 = 0.5;
  // exploration weight for Ucb; defaults to the pool-size formula below
  std::optional<double> ucb_beta_override = std::nullopt;
  // smallest PMF entry after utilities_to_pmf; keeps every sample reachable
  double pmf_floor = 1e-6;
};

// ---- pointwise utility scores ------------------------------------------

inline double score_self_entropy(const ProbVector& main) {
  return shannon_entropy(main);
}

// Exploration weight sqrt(ln(2 * n^4.5)) for a candidate pool of size n.
inline double ucb_beta(std::size_t pool_size) {
  if (pool_size < 2) fail(Errc::BadPoolSize, "ucb needs a pool of >= 2");
  double n = static_cast<double>(pool_size);
  return std::sqrt(std::log(2.0 * std::pow(n, 4.5)));
}

// Optimism-boosted entropy: mean surprisal plus beta times its spread.
inline double score_ucb(const ProbVector& main, std::size_t pool_size,
                        const AcqConfig& cfg = {}) {
  double beta =
      cfg.ucb_beta_override ? *cfg.ucb_beta_override : ucb_beta(pool_size);
  return shannon_entropy(main) + beta * std::sqrt(varentropy(main));
}

inline double score_multilm_ce(const ProbVector& main,
                               const ProbVector& surrogate) {
  return cross_entropy(surrogate, main);
}

inline double score_uniformlm_ce(const ProbVector& main) {
  return cross_entropy(ProbVector::uniform(main.size()), main);
}

inline double score_multilm_uniform_ce(const ProbVector& main,
                                       const ProbVector& surrogate,
                                       const AcqConfig& cfg = {}) {
  return cross_entropy(mix_with_uniform(surrogate, cfg.w1, cfg.w2), main);
}

inline double score_multilm_jsd(const ProbVector& main,
                                const ProbVector& surrogate) {
  return jensen_shannon(main, surrogate);
}

inline double score_uniformlm_jsd(const ProbVector& main) {
  return jensen_shannon(main, ProbVector::uniform(main.size()));
}

inline double score_multilm_uniform_jsd(const ProbVector& main,
                                        const ProbVector& surrogate) {
  return jensen_shannon3(main, surrogate, ProbVector::uniform(main.size()));
}

// Scores one candidate under any pointwise function. `surrogate` may be
// null for functions that do not use it; LmCluster is not pointwise and is
// rejected here.
inline double acquisition_utility(const AcqConfig& cfg, const ProbVector& main,
                                  const ProbVector* surrogate,
                                  std::size_t pool_size) {
  if (needs_surrogate(cfg.function) && surrogate == nullptr)
    fail(Errc::MissingSurrogate,
         std::string(to_string(cfg.function)) + " needs surrogate output");
  switch (cfg.function) {
    case AcqFunction::Random: return 1.0;
    case AcqFunction::SelfEntropy: return score_self_entropy(main);
    case AcqFunction::Ucb: return score_ucb(main, pool_size, cfg);
    case AcqFunction::MultiLmCe: return score_multilm_ce(main, *surrogate);
    case AcqFunction::UniformLmCe: return score_uniformlm_ce(main);
    case AcqFunction::MultiLmUniformCe:
      return score_multilm_uniform_ce(main, *surrogate, cfg);
    case AcqFunction::MultiLmJsd: return score_multilm_jsd(main, *surrogate);
    case AcqFunction::UniformLmJsd: return score_uniformlm_jsd(main);
    case AcqFunction::MultiLmUniformJsd:
      return score_multilm_uniform_jsd(main, *surrogate);
    case AcqFunction::LmCluster:
      fail(Errc::BadConfig, "lmcluster is not a pointwise score");
  }
  fail(Errc::BadConfig, "unhandled acquisition function");
}

// ---- utility scores -> acquisition PMF ----------------------------------
//
// Proportional normalization with full support: shift so the minimum is 0,
// divide by the total, then floor every entry at pmf_floor and renormalize.
// All-zero utilities degrade to the uniform PMF. Scaling utilities by any
// c > 0 leaves the result unchanged up to rounding.
inline std::vector<double> utilities_to_pmf(std::span<const double> utilities,
                                            const AcqConfig& cfg = {}) {
  const std::size_t n = utilities.size();
  if (n == 0) fail(Errc::EmptyInput, "no utilities given");
  if (!(cfg.pmf_floor > 0.0) || cfg.pmf_floor >= 1.0 / static_cast<double>(n))
    fail(Errc::BadConfig, "pmf_floor must lie in (0, 1/N)");

  double mn = utilities[0];
  for (double u : utilities) {
    if (!std::isfinite(u)) fail(Errc::NonFinite, "non-finite utility");
    mn = std::min(mn, u);
  }
  std::vector<double> out(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = utilities[i] - (mn < 0.0 ? mn : 0.0);
    total += out[i];
  }
  if (total == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(n));
    return out;
  }
  double floored_total = 0.0;
  for (auto& v : out) {
    v = std::max(v / total, cfg.pmf_floor);
    floored_total += v;
  }
  for (auto& v : out) v /= floored_total;
  return out;
}

// ---- weighted sampling without replacement -------------------------------

struct AcquisitionStep {
  std::size_t step;          // 1-based position in the trace
  std::size_t sample_index;  // position in the candidate pool
  double acq_prob;           // probability of this pick among the remaining
  double utility;            // raw score of the pick at selection time
};

struct AcquisitionTrace {
  AcqFunction function = AcqFunction::Random;
  std::uint64_t seed = 0;
  std::size_t pool_size = 0;
  std::vector<AcquisitionStep> steps;
};

// Draws `budget` distinct indices according to `pmf`, renormalizing over the
// remainder after each pick, and records the per-step inclusion probability
// q_m = w_pick / sum(w_remaining) exactly as used by the draw. `utilities`,
// when given, fills the trace's utility column; otherwise the PMF value is
// recorded. One uniform variate is consumed per step.
inline AcquisitionTrace draw_without_replacement(
    std::span<const double> pmf, std::size_t budget, std::uint64_t seed,
    AcqFunction function = AcqFunction::Random,
    std::span<const double> utilities = {}) {
  const std::size_t n = pmf.size();
  if (n == 0) fail(Errc::EmptyInput, "empty pmf");
  if (budget < 1 || budget > n)
    fail(Errc::BudgetExceedsPool,
         "budget " + std::to_string(budget) + " outside [1, " +
             std::to_string(n) + "]");
  if (!utilities.empty() && utilities.size() != n)
    fail(Errc::DimensionMismatch, "utilities length differs from pmf");
  double mass = 0.0;
  for (double w : pmf) {
    if (!std::isfinite(w) || w < 0.0)
      fail(Errc::BadProbability, "pmf entries must be finite and >= 0");
    mass += w;
  }
  if (std::fabs(mass - 1.0) > kMassTolerance)
    fail(Errc::BadProbability, "pmf mass outside tolerance");

  AcquisitionTrace trace{function, seed, n, {}};
  trace.steps.reserve(budget);
  SplitMix64 rng(seed);
  std::vector<std::size_t> alive(n);
  for (std::size_t i = 0; i < n; ++i) alive[i] = i;

  for (std::size_t m = 1; m <= budget; ++m) {
    double total = 0.0;
    for (std::size_t idx : alive) total += pmf[idx];
    if (total <= 0.0)
      fail(Errc::ZeroMass, "remaining pmf mass is zero at step " +
                               std::to_string(m));
    const double target = rng.next_double() * total;
    double cum = 0.0;
    std::size_t pick_pos = alive.size();
    for (std::size_t pos = 0; pos < alive.size(); ++pos) {
      cum += pmf[alive[pos]];
      if (cum > target) {
        pick_pos = pos;
        break;
      }
    }
    if (pick_pos == alive.size()) {
      // rounding pushed the target past the last positive weight
      for (std::size_t pos = alive.size(); pos-- > 0;) {
        if (pmf[alive[pos]] > 0.0) {
          pick_pos = pos;
          break;
        }
      }
    }
    const std::size_t pick = alive[pick_pos];
    trace.steps.push_back(
        {m, pick, pmf[pick] / total,
         utilities.empty() ? pmf[pick] : utilities[pick]});
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pick_pos));
  }
  return trace;
}

}  // namespace gat
