// Acceptance gate: ten numbered checks, one [PASS]/[FAIL] line each.
// Runs standalone (no test framework) so the output reads as a checklist.
// `--criterion N` restricts the run to one check; exit code 1 if any
// selected check fails. Each check also carries a wall-clock budget that
// is part of its pass condition.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gat/acquisition.hpp"
#include "gat/adaptation.hpp"
#include "gat/cluster.hpp"
#include "gat/data_io.hpp"
#include "gat/estimators.hpp"
#include "gat/harness.hpp"
#include "gat/metrics.hpp"
#include "gat/prob.hpp"
#include "gat/prompts.hpp"
#include "gat/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gat;

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn3 = 1.0986122886681098;

// Collects sub-check results; remembers the first failure for the report line.
struct Checker {
  int checked = 0;
  int failed = 0;
  std::string first_failure;

  void expect(bool cond, const std::string& what) {
    ++checked;
    if (cond) return;
    ++failed;
    if (first_failure.empty()) first_failure = what;
  }

  void expect_near(double actual, double want, double tol,
                   const std::string& what) {
    std::ostringstream os;
    os << what << ": got " << actual << ", want " << want << " +/- " << tol;
    expect(std::fabs(actual - want) <= tol, os.str());
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

ProbVector random_dist(SplitMix64& rng, std::size_t k, double lo = 1e-3) {
  std::vector<double> raw(k);
  for (auto& v : raw) v = rng.next_double(lo, 1.0);
  return normalize(raw);
}

std::pair<double, double> mean_and_sample_var(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1.0)};
}

// ---------------------------------------------------------------------------
// 1. information-measure oracles

Checker criterion1() {
  Checker c;
  const double tol = 1e-9;

  auto n1 = normalize(std::vector<double>{2, 2});
  c.expect_near(n1[0], 0.5, tol, "normalize([2,2])[0]");
  c.expect_near(n1[1], 0.5, tol, "normalize([2,2])[1]");
  auto n2 = normalize(std::vector<double>{1, 0, 0});
  c.expect_near(n2[0], 1.0, tol, "normalize([1,0,0])[0]");
  c.expect_near(n2[1], 0.0, tol, "normalize([1,0,0])[1]");
  auto n3 = normalize(std::vector<double>{3, 1});
  c.expect_near(n3[0], 0.75, tol, "normalize([3,1])[0]");
  c.expect_near(n3[1], 0.25, tol, "normalize([3,1])[1]");

  c.expect_near(ProbVector::uniform(2)[0], 0.5, tol, "uniform(2)");
  c.expect_near(ProbVector::uniform(4)[2], 0.25, tol, "uniform(4)");
  c.expect_near(ProbVector::uniform(3)[1], 1.0 / 3.0, tol, "uniform(3)");

  c.expect_near(shannon_entropy(ProbVector({0.5, 0.5})), kLn2, tol,
                "entropy([0.5,0.5])");
  c.expect_near(shannon_entropy(ProbVector({1.0, 0.0})), 0.0, tol,
                "entropy([1,0])");
  c.expect_near(shannon_entropy(ProbVector({0.8, 0.2})), 0.5004024235381879,
                tol, "entropy([0.8,0.2])");

  const ProbVector half({0.5, 0.5});
  c.expect_near(cross_entropy(half, half), kLn2, tol, "ce(self)");
  c.expect_near(cross_entropy(ProbVector::uniform(2), ProbVector({0.9, 0.1})),
                1.203972804325936, tol, "ce(u2, [0.9,0.1])");
  c.expect_near(cross_entropy(ProbVector({1.0, 0.0}), ProbVector({1.0, 0.0})),
                0.0, tol, "ce(degenerate)");

  c.expect_near(kl_divergence(ProbVector({0.3, 0.7}), ProbVector({0.3, 0.7})),
                0.0, tol, "kl(p,p)");
  c.expect_near(kl_divergence(ProbVector({1.0, 0.0}), half), kLn2, tol,
                "kl([1,0], [0.5,0.5])");
  c.expect_near(kl_divergence(half, ProbVector({0.75, 0.25})),
                0.14384103622589042, tol, "kl([0.5,0.5],[0.75,0.25])");

  c.expect_near(jensen_shannon(ProbVector({0.4, 0.6}), ProbVector({0.4, 0.6})), 0.0, tol,
                "jensen_shannon(p,p)");
  c.expect_near(jensen_shannon(ProbVector({1.0, 0.0}), ProbVector({0.0, 1.0})), kLn2,
                tol, "jsd2 max");
  c.expect_near(jensen_shannon(ProbVector({0.8, 0.2}), ProbVector({0.2, 0.8})),
                0.19274475702175753, tol, "jensen_shannon([0.8,0.2],[0.2,0.8])");

  c.expect_near(jensen_shannon3(half, half, half), 0.0, tol, "jensen_shannon3(p,p,p)");
  c.expect_near(jensen_shannon3(ProbVector({1.0, 0.0, 0.0}), ProbVector({0.0, 1.0, 0.0}),
                     ProbVector({0.0, 0.0, 1.0})),
                kLn3, tol, "jsd3 max");
  c.expect_near(jensen_shannon3(ProbVector({0.7, 0.3}), half, ProbVector::uniform(2)),
                0.01851221073870561, tol, "jensen_shannon3([0.7,0.3], u, u)");

  const ProbVector q({0.6, 0.4});
  auto m1 = mix_with_uniform(q, 0.0, 1.0);
  c.expect_near(m1[0], 0.5, tol, "mixture w1=0");
  auto m2 = mix_with_uniform(q, 1.0, 0.0);
  c.expect_near(m2[0], 0.6, tol, "mixture w1=1");
  auto m3 = mix_with_uniform(q, 0.5, 0.5);
  c.expect_near(m3[0], 0.55, tol, "mixture half");
  c.expect_near(m3[1], 0.45, tol, "mixture half [1]");

  c.expect_near(varentropy(ProbVector::uniform(5)), 0.0, tol,
                "varentropy(uniform)");
  c.expect_near(varentropy(ProbVector({1.0, 0.0})), 0.0, tol,
                "varentropy(degenerate)");
  c.expect_near(varentropy(ProbVector({0.8, 0.2})), 0.3074899289076488, tol,
                "varentropy([0.8,0.2])");

  // acquisition-side arithmetic built from the same measures
  c.expect_near(ucb_beta(100), 4.627787054036341, tol, "ucb_beta(100)");
  const ProbVector main({0.9, 0.1});
  const ProbVector surr({0.6, 0.4});
  c.expect_near(
      acquisition_utility(AcqConfig{.function = AcqFunction::Ucb},
                          ProbVector({0.8, 0.2}), nullptr, 100),
      3.066592462527872, tol, "ucb utility([0.8,0.2], n=100)");
  c.expect_near(
      acquisition_utility(AcqConfig{.function = AcqFunction::MultiLmCe}, main,
                          &surr, 2),
      0.984250346592314, tol, "multilm_ce utility");
  c.expect_near(
      acquisition_utility(
          AcqConfig{.function = AcqFunction::MultiLmUniformCe}, main, &surr,
          2),
      1.0941115754591249, tol, "multilm_uniform_ce utility");
  c.expect_near(
      acquisition_utility(AcqConfig{.function = AcqFunction::UniformLmJsd},
                          main, nullptr, 2),
      0.10174922507919676, tol, "uniformlm_jsd utility");

  // property sweep over random strictly-positive distributions
  SplitMix64 rng(mix_seed(42, fnv1a("measure-sweep")));
  const double ptol = 1e-10;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.next_double() * 5);
    auto p = random_dist(rng, k);
    auto qq = random_dist(rng, k);
    const double kl = kl_divergence(p, qq);
    if (kl < -ptol) {
      c.expect(false, "gibbs violated at sweep " + std::to_string(i));
      break;
    }
    const double j2 = jensen_shannon(p, qq);
    const double j3 = jensen_shannon3(p, qq, ProbVector::uniform(k));
    if (j2 < -ptol || j2 > kLn2 + ptol || j3 < -ptol || j3 > kLn3 + ptol) {
      c.expect(false, "jsd bound violated at sweep " + std::to_string(i));
      break;
    }
    const double ce = cross_entropy(p, qq);
    if (std::fabs(ce - (shannon_entropy(p) + kl)) > ptol) {
      c.expect(false, "ce != h + kl at sweep " + std::to_string(i));
      break;
    }
    c.expect(true, "");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 2. debiased-estimator unbiasedness (monte carlo)

Checker criterion2() {
  Checker c;
  const std::size_t n = 200;
  SplitMix64 rng(mix_seed(42, fnv1a("lure-mc")));

  std::vector<double> losses(n);
  for (auto& l : losses) l = rng.next_double() < 0.3 ? 1.0 : 0.0;
  std::vector<double> entropies(n);
  for (auto& e : entropies) e = shannon_entropy(random_dist(rng, 2));
  const auto pmf = utilities_to_pmf(entropies);
  const double r_true =
      std::accumulate(losses.begin(), losses.end(), 0.0) / double(n);

  const std::size_t traces = 10000;
  for (std::size_t m : {std::size_t{10}, std::size_t{50}, std::size_t{100}}) {
    std::vector<double> estimates;
    estimates.reserve(traces);
    for (std::size_t t = 0; t < traces; ++t) {
      const auto trace = draw_without_replacement(
          pmf, m, mix_seed(42, m, t), AcqFunction::SelfEntropy, entropies);
      estimates.push_back(lure_estimate(trace.steps, losses, n).value);
    }
    auto [mean, var] = mean_and_sample_var(estimates);
    const double se = std::sqrt(var / double(traces));
    std::ostringstream os;
    os << "m=" << m << ": |" << fmt(mean) << " - " << fmt(r_true) << "| vs 4se="
       << fmt(4 * se);
    c.expect(std::fabs(mean - r_true) <= 4.0 * se, os.str());
  }

  const auto full = draw_without_replacement(pmf, n, mix_seed(42, n, 0),
                                             AcqFunction::SelfEntropy,
                                             entropies);
  const double est_full = lure_estimate(full.steps, losses, n).value;
  c.expect_near(est_full, r_true, 1e-12, "m=n exact recovery");
  return c;
}

// ---------------------------------------------------------------------------
// 3. debiased-estimator exactness (exhaustive enumeration)

// Expands every ordered acquisition sequence of length `m` and accumulates
// P(sequence) * estimate(sequence). The sequence probability is the product
// of per-step renormalized pick probabilities, which is exactly what the
// recorded acq_prob values are.
void enumerate_sequences(const std::vector<double>& pmf,
                         const std::vector<double>& losses, std::size_t m,
                         std::vector<AcquisitionStep>& steps,
                         std::vector<bool>& taken, double mass,
                         double prob_so_far, double& expectation) {
  const std::size_t n = pmf.size();
  if (steps.size() == m) {
    expectation +=
        prob_so_far * lure_estimate(steps, losses, n).value;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (taken[i]) continue;
    const double q = pmf[i] / mass;
    steps.push_back({steps.size() + 1, i, q, pmf[i]});
    taken[i] = true;
    enumerate_sequences(pmf, losses, m, steps, taken, mass - pmf[i],
                        prob_so_far * q, expectation);
    taken[i] = false;
    steps.pop_back();
  }
}

Checker criterion3() {
  Checker c;
  SplitMix64 rng(mix_seed(42, fnv1a("lure-enum")));
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> pmf(n);
      double mass = 0.0;
      for (auto& v : pmf) {
        v = rng.next_double(0.05, 1.0);
        mass += v;
      }
      for (auto& v : pmf) v /= mass;
      std::vector<double> losses(n);
      for (auto& l : losses) l = rng.next_double();
      const double r_true =
          std::accumulate(losses.begin(), losses.end(), 0.0) / double(n);

      for (std::size_t m = 1; m <= n; ++m) {
        double expectation = 0.0;
        std::vector<AcquisitionStep> steps;
        std::vector<bool> taken(n, false);
        enumerate_sequences(pmf, losses, m, steps, taken, 1.0, 1.0,
                            expectation);
        std::ostringstream os;
        os << "n=" << n << " m=" << m << " rep=" << rep << ": E[estimate]="
           << fmt(expectation) << " vs " << fmt(r_true);
        c.expect(std::fabs(expectation - r_true) <= 1e-10, os.str());
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 4. geometric-mean and gain arithmetic

Checker criterion4() {
  Checker c;
  c.expect_near(geometric_mean(std::vector<double>{0.00339, 0.00061, 0.00058}),
                0.00106, 5e-6, "geo mean of first triple");
  c.expect_near(performance_gain(0.00106, 0.00064), 39.62, 0.05,
                "gain(0.00106 -> 0.00064)");
  // Known to miss: the inputs carry 2 significant figures, and their exact
  // geometric mean (0.00063483) sits 5.17e-6 from the rounded target, just
  // outside the 5e-6 window. Rounded inputs cannot reproduce a mean that was
  // computed from unrounded values, so this line reports the miss honestly.
  c.expect_near(geometric_mean(std::vector<double>{0.00160, 0.00041, 0.00039}),
                0.00064, 5e-6, "geo mean of second triple");
  c.expect_near(performance_gain(0.00095, 0.00044), 53.68, 0.05,
                "gain(0.00095 -> 0.00044)");
  return c;
}

// ---------------------------------------------------------------------------
// 5. uniform-blend cross-entropy beats raw self-entropy on overconfident pools

Checker criterion5() {
  Checker c;
  const fs::path dir =
      fs::temp_directory_path() /
      ("gat_acc5_" +
       std::to_string(
           std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(dir);

  int wins = 0;
  for (std::uint64_t master = 42; master < 47; ++master) {
    SyntheticScenario sc;
    sc.kind = SyntheticKind::MiscalibratedOverconfident;
    sc.n = 500;
    sc.k = 2;
    sc.error_rate = 0.3;
    sc.overconfident_fraction = 0.6;
    sc.seed = master;
    const fs::path pool = dir / ("pool_" + std::to_string(master) + ".jsonl");
    write_pool(pool, generate_synthetic(sc));

    ExperimentConfig cfg;
    cfg.pool_paths = {pool};
    cfg.functions = {AcqConfig{.function = AcqFunction::SelfEntropy},
                     AcqConfig{.function = AcqFunction::UniformLmCe}};
    cfg.runs = 50;
    cfg.master_seed = master;
    const auto report = run_experiment(cfg);

    double auc_self = -1.0, auc_uniform = -1.0;
    for (const auto& cell : report.cells) {
      c.expect(!cell.failed(), "cell failed: " + cell.error);
      if (cell.acq.function == AcqFunction::SelfEntropy) auc_self = cell.auc;
      if (cell.acq.function == AcqFunction::UniformLmCe)
        auc_uniform = cell.auc;
    }
    if (auc_uniform < auc_self) ++wins;
  }
  fs::remove_all(dir);
  c.expect(wins >= 4, "uniform-blend won only " + std::to_string(wins) +
                          "/5 seeds");
  return c;
}

// ---------------------------------------------------------------------------
// 6. cluster acquisition: unbiased weighting costs variance

Checker criterion6() {
  Checker c;
  const std::size_t n = 300, k = 17, budget = 30;
  SplitMix64 rng(mix_seed(42, fnv1a("cluster-var")));

  std::vector<std::vector<double>> embeddings(n, std::vector<double>(8));
  for (auto& e : embeddings)
    for (auto& v : e) v = rng.next_normal();
  std::vector<double> entropies(n);
  for (auto& e : entropies) e = shannon_entropy(random_dist(rng, 2));
  std::vector<double> losses(n);
  for (auto& l : losses) l = rng.next_double() < 0.3 ? 1.0 : 0.0;

  const auto assignment =
      balanced_kmeans(embeddings, k, mix_seed(42, fnv1a("kmeans")));

  std::vector<double> lure_vals, biased_vals;
  lure_vals.reserve(1000);
  biased_vals.reserve(1000);
  for (std::size_t run = 0; run < 1000; ++run) {
    const auto trace =
        cluster_acquire(assignment, entropies, budget, mix_seed(42, run));
    lure_vals.push_back(lure_estimate(trace.steps, losses, n).value);
    biased_vals.push_back(biased_mean_estimate(trace.steps, losses).value);
  }
  const double var_lure = mean_and_sample_var(lure_vals).second;
  const double var_biased = mean_and_sample_var(biased_vals).second;
  c.expect(var_lure > var_biased,
           "var(debiased)=" + fmt(var_lure) + " not above var(simple mean)=" +
               fmt(var_biased));
  return c;
}

// ---------------------------------------------------------------------------
// 7. conditional auroc matches the all-pairs oracle

Checker criterion7() {
  Checker c;
  SplitMix64 rng(mix_seed(42, fnv1a("auroc-oracle")));
  const double threshold = 0.7;

  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_double() * 50);
    std::vector<ConfRecord> records(n);
    for (auto& r : records) {
      // coarse grids force ties on both axes
      r.confidence = 0.5 + 0.05 * std::floor(rng.next_double() * 11);
      r.uncertainty = 0.1 * std::floor(rng.next_double() * 8);
      r.is_error = rng.next_double() < 0.4;
    }

    std::vector<std::pair<double, bool>> kept;
    for (const auto& r : records)
      if (r.confidence >= threshold) kept.push_back({r.uncertainty, r.is_error});
    std::size_t pos = 0;
    for (const auto& [u, e] : kept) pos += e ? 1 : 0;
    const std::size_t neg = kept.size() - pos;

    if (pos == 0 || neg == 0) {
      bool threw = false;
      try {
        conditional_auroc(records, threshold);
      } catch (const Error& e) {
        threw = e.code() == Errc::DegenerateSubset;
      }
      c.expect(threw, "degenerate subset not rejected at instance " +
                          std::to_string(inst));
      continue;
    }

    double pairs = 0.0;
    for (const auto& [ue, ee] : kept) {
      if (!ee) continue;
      for (const auto& [un, en] : kept) {
        if (en) continue;
        if (ue > un) pairs += 1.0;
        else if (ue == un) pairs += 0.5;
      }
    }
    const double oracle = pairs / (double(pos) * double(neg));
    const double fast = conditional_auroc(records, threshold);
    c.expect(fast == oracle, "instance " + std::to_string(inst) + ": " +
                                 fmt(fast) + " != oracle " + fmt(oracle));
  }
  return c;
}

// ---------------------------------------------------------------------------
// 8. adaptation selection invariants and prompt goldens

Checker criterion8() {
  Checker c;
  SplitMix64 rng(mix_seed(42, fnv1a("select-sweep")));

  for (int i = 0; i < 10000; ++i) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.next_double() * 5);
    std::vector<double> raw(k);
    // quantized masses so exact ties happen often
    for (auto& v : raw) v = 1.0 + std::floor(rng.next_double() * 4);
    const ProbVector dist = normalize(raw);

    // sort-based oracle: order descending by probability, index ascending
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return dist[a] > dist[b];
                     });
    const std::size_t want_most = order[0];
    const std::size_t want_runnerup = order[1];
    std::size_t want_least = 0;
    for (std::size_t j = 1; j < k; ++j)
      if (dist[j] < dist[want_least]) want_least = j;

    const bool ok =
        select_option(OracleStrategy::MostConf, dist) == want_most &&
        select_option(OracleStrategy::LeastConf, dist) == want_least &&
        select_option(OracleStrategy::RunnerUp, dist) == want_runnerup;
    c.expect(ok, "selection mismatch at sweep " + std::to_string(i));
    if (!ok) break;
  }

  for (std::size_t chosen = 0; chosen < 4; ++chosen)
    for (std::size_t gold = 0; gold < 4; ++gold)
      c.expect(derive_nlv_label(chosen, gold) == (chosen == gold),
               "label truth table at (" + std::to_string(chosen) + "," +
                   std::to_string(gold) + ")");

  const auto read_asset = [](const char* rel) {
    std::ifstream in(fs::path(GAT_ASSETS_DIR) / rel, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  c.expect(read_asset("prompts/v1/nlv.txt") == kNlvTemplate,
           "verification template differs from asset file");
  c.expect(read_asset("prompts/v1/default_qa.txt") == kDefaultQaTemplate,
           "qa template differs from asset file");
  c.expect(read_asset("prompts/v1/agnews.txt") == kAgnewsTemplate,
           "classification template differs from asset file");

  c.expect(build_nlv_prompt("Paris is in France.", "Paris is a capital.") ==
               "Context: Paris is in France.\n"
               "Statement: Paris is a capital.\n"
               "Is the claim supported by the given context? Return only the "
               "option corresponding to the correct choice.\n"
               "Choices: { A. true, B. false }\n"
               "Answer: ",
           "rendered verification prompt differs from golden");
  return c;
}

// ---------------------------------------------------------------------------
// 9. end-to-end run determinism through the installed binary

Checker criterion9() {
  Checker c;
  const fs::path dir =
      fs::temp_directory_path() /
      ("gat_acc9_" +
       std::to_string(
           std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(dir);

  SyntheticScenario sc;
  sc.kind = SyntheticKind::Calibrated;
  sc.n = 60;
  sc.k = 2;
  sc.error_rate = 0.3;
  sc.seed = 9;
  const fs::path pool = dir / "pool.jsonl";
  write_pool(pool, generate_synthetic(sc));

  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg, std::ios::binary);
    out << R"({"pool_paths":[")" << pool.string() << R"("],)"
        << R"("functions":["random","self_entropy","ucb"],)"
        << R"("runs":4,"budget_grid":[0.05,0.10,0.25,0.50]})";
  }

  const auto run_once = [&](const std::string& sub, const std::string& extra) {
    const fs::path out_dir = dir / sub;
    const std::string cmd = std::string(GAT_CLI_PATH) + " run --config \"" +
                            cfg.string() + "\" --output-dir \"" +
                            out_dir.string() + "\"" + extra + " > \"" +
                            (dir / (sub + ".log")).string() + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) && WEXITSTATUS(raw) == 0;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };

  c.expect(run_once("a", ""), "first run failed");
  c.expect(run_once("b", ""), "second run failed");
  c.expect(run_once("c", " --reverse-cells"), "reversed run failed");
  const std::string a = slurp(dir / "a" / "report.csv");
  c.expect(!a.empty(), "first report.csv empty");
  c.expect(a == slurp(dir / "b" / "report.csv"),
           "repeat run changed report.csv");
  c.expect(a == slurp(dir / "c" / "report.csv"),
           "cell order changed report.csv");
  fs::remove_all(dir);
  return c;
}

// ---------------------------------------------------------------------------
// 10. estimation-error decay with budget

Checker criterion10() {
  Checker c;
  const fs::path dir =
      fs::temp_directory_path() /
      ("gat_acc10_" +
       std::to_string(
           std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(dir);

  SyntheticScenario sc;
  sc.kind = SyntheticKind::Calibrated;
  sc.n = 400;
  sc.k = 2;
  sc.error_rate = 0.3;
  sc.seed = 7;
  const fs::path pool = dir / "pool.jsonl";
  write_pool(pool, generate_synthetic(sc));

  ExperimentConfig cfg;
  cfg.pool_paths = {pool};
  cfg.functions = {AcqConfig{.function = AcqFunction::Random}};
  cfg.runs = 200;
  cfg.master_seed = 42;
  const auto report = run_experiment(cfg);
  fs::remove_all(dir);

  c.expect(report.cells.size() == 1, "expected a single cell");
  const auto& cell = report.cells.front();
  c.expect(!cell.failed(), "cell failed: " + cell.error);
  const auto& mse = cell.curve.mean_sq_error;
  c.expect(mse.size() == 46, "expected the 46-point default grid");

  c.expect(mse.back() < mse.front(),
           "mse at b=0.50 (" + fmt(mse.back()) + ") not below b=0.05 (" +
               fmt(mse.front()) + ")");

  // 5-point moving average, then require a monotone decay
  std::vector<double> smooth;
  for (std::size_t i = 0; i + 5 <= mse.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = i; j < i + 5; ++j) s += mse[j];
    smooth.push_back(s / 5.0);
  }
  for (std::size_t i = 1; i < smooth.size(); ++i) {
    if (smooth[i] > smooth[i - 1]) {
      c.expect(false, "smoothed curve rises at window " + std::to_string(i) +
                          ": " + fmt(smooth[i - 1]) + " -> " + fmt(smooth[i]));
      break;
    }
  }
  c.expect(true, "");
  return c;
}

struct Criterion {
  int number;
  const char* name;
  double time_cap_sec;
  std::function<Checker()> body;
};

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--help" || arg == "-h") {
      std::printf("usage: gat_acceptance [--criterion N]\n");
      return 0;
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "information-measure oracles", 5.0, criterion1},
      {2, "debiased-estimator unbiasedness (monte carlo)", 60.0, criterion2},
      {3, "debiased-estimator exactness (exhaustive enumeration)", 30.0,
       criterion3},
      {4, "geometric-mean and gain arithmetic", 1.0, criterion4},
      {5, "uniform-blend acquisition beats self-entropy when overconfident",
       120.0, criterion5},
      {6, "cluster acquisition: unbiased weighting costs variance", 60.0,
       criterion6},
      {7, "conditional auroc matches all-pairs oracle", 10.0, criterion7},
      {8, "adaptation selection invariants and prompt goldens", 5.0,
       criterion8},
      {9, "end-to-end run determinism", 30.0, criterion9},
      {10, "estimation-error decay with budget", 60.0, criterion10},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    if (only && *only != cr.number) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Checker result;
    try {
      result = cr.body();
    } catch (const std::exception& e) {
      result.expect(false, std::string("unexpected exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_time = elapsed <= cr.time_cap_sec;
    const bool pass = result.failed == 0 && in_time;
    if (!pass) ++failures;

    std::printf("[%s] %2d %s (%.2fs, %d checks)", pass ? "PASS" : "FAIL",
                cr.number, cr.name, elapsed, result.checked);
    if (result.failed > 0)
      std::printf(" first failure: %s", result.first_failure.c_str());
    else if (!in_time)
      std::printf(" exceeded %.0fs budget", cr.time_cap_sec);
    std::printf("\n");
  }

  if (only && std::none_of(criteria.begin(), criteria.end(),
                           [&](const Criterion& cr) {
                             return cr.number == *only;
                           })) {
    std::fprintf(stderr, "no criterion %d\n", *only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
