#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gat/acquisition.hpp"
#include "gat/adaptation.hpp"
#include "gat/cluster.hpp"
#include "gat/data_io.hpp"
#include "gat/errors.hpp"
#include "gat/estimators.hpp"
#include "gat/metrics.hpp"
#include "gat/prob.hpp"
#include "gat/rng.hpp"

namespace gat {

enum class LossKind { ZeroOne, CrossEntropy };

inline const char* to_string(LossKind k) {
  switch (k) {
    case LossKind::ZeroOne: return "zero_one";
    case LossKind::CrossEntropy: return "cross_entropy";
  }
  return "unknown";
}

inline LossKind parse_loss_kind(std::string_view token) {
  if (token == "zero_one") return LossKind::ZeroOne;
  if (token == "cross_entropy") return LossKind::CrossEntropy;
  fail(Errc::BadConfig, "unknown loss kind '" + std::string(token) + "'");
}

inline std::vector<double> default_budget_grid() {
  std::vector<double> grid;
  grid.reserve(46);
  for (int pct = 5; pct <= 50; ++pct)
    grid.push_back(static_cast<double>(pct) / 100.0);
  return grid;
}

// Labeled-sample count for a budget fraction: ceil(b*N), nudged so that
// fractions like 0.07*300 landing a hair above an integer do not round up
// twice, and clamped to [1, N].
inline std::size_t budget_to_count(double fraction, std::size_t pool_size) {
  const double raw =
      std::ceil(fraction * static_cast<double>(pool_size) - 1e-9);
  const auto count = static_cast<std::size_t>(std::max(raw, 1.0));
  return std::min(count, pool_size);
}

struct ExperimentConfig {
  std::vector<std::filesystem::path> pool_paths;
  std::vector<AcqConfig> functions;
  OracleStrategy strategy = OracleStrategy::RunnerUp;  // for adaptation runs
  std::vector<Estimator> estimators = {Estimator::Lure};
  std::size_t runs = 10;
  std::uint64_t master_seed = 42;
  std::vector<double> budget_grid = default_budget_grid();
  std::filesystem::path output_dir = "gat_out";
  LossKind loss_kind = LossKind::ZeroOne;
  // execution details; they never change the emitted numbers
  std::size_t jobs = 1;
  bool emit_traces = false;
  std::optional<std::size_t> cluster_k;
  bool reverse_cells = false;
};

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.pool_paths.empty()) fail(Errc::BadConfig, "pool_paths is empty");
  if (cfg.functions.empty()) fail(Errc::BadConfig, "functions is empty");
  if (cfg.estimators.empty()) fail(Errc::BadConfig, "estimators is empty");
  if (cfg.runs < 1) fail(Errc::BadConfig, "runs must be >= 1");
  if (cfg.jobs < 1) fail(Errc::BadConfig, "jobs must be >= 1");
  if (cfg.budget_grid.empty()) fail(Errc::BadConfig, "budget_grid is empty");
  for (std::size_t b = 0; b < cfg.budget_grid.size(); ++b) {
    const double v = cfg.budget_grid[b];
    if (!(v >= 0.05 - 1e-9) || !(v <= 0.50 + 1e-9))
      fail(Errc::BadConfig, "budget grid entries must lie in [0.05, 0.50]");
    if (b > 0 && !(v > cfg.budget_grid[b - 1]))
      fail(Errc::BadConfig, "budget grid must be strictly increasing");
  }
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(Errc::BadConfig, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "pool_paths", "functions",   "strategy",    "estimators",
      "runs",       "master_seed", "budget_grid", "output_dir",
      "loss_kind",  "jobs",        "emit_traces", "cluster_k",
      "reverse_cells"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(Errc::BadConfig, "unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("pool_paths"))
      for (const auto& p : j.at("pool_paths"))
        cfg.pool_paths.emplace_back(p.get<std::string>());
    if (j.contains("functions")) {
      for (const auto& f : j.at("functions")) {
        AcqConfig acq;
        if (f.is_string()) {
          acq.function = parse_acq_function(f.get<std::string>());
        } else if (f.is_object()) {
          acq.function =
              parse_acq_function(f.at("function").get<std::string>());
          if (f.contains("w1")) acq.w1 = f.at("w1").get<double>();
          if (f.contains("w2")) acq.w2 = f.at("w2").get<double>();
          if (f.contains("ucb_beta_override"))
            acq.ucb_beta_override = f.at("ucb_beta_override").get<double>();
          if (f.contains("pmf_floor"))
            acq.pmf_floor = f.at("pmf_floor").get<double>();
        } else {
          fail(Errc::BadConfig, "function entries must be strings or objects");
        }
        cfg.functions.push_back(acq);
      }
    }
    if (j.contains("strategy"))
      cfg.strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (j.contains("estimators")) {
      cfg.estimators.clear();
      for (const auto& e : j.at("estimators"))
        cfg.estimators.push_back(parse_estimator(e.get<std::string>()));
    }
    if (j.contains("runs")) cfg.runs = j.at("runs").get<std::size_t>();
    if (j.contains("master_seed"))
      cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("budget_grid"))
      cfg.budget_grid = j.at("budget_grid").get<std::vector<double>>();
    if (j.contains("output_dir"))
      cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("loss_kind"))
      cfg.loss_kind = parse_loss_kind(j.at("loss_kind").get<std::string>());
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<std::size_t>();
    if (j.contains("emit_traces"))
      cfg.emit_traces = j.at("emit_traces").get<bool>();
    if (j.contains("cluster_k") && !j.at("cluster_k").is_null())
      cfg.cluster_k = j.at("cluster_k").get<std::size_t>();
    if (j.contains("reverse_cells"))
      cfg.reverse_cells = j.at("reverse_cells").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::BadConfig, std::string("malformed config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.good())
    fail(Errc::BadConfig, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

// Per-sample losses the estimators work on. Correctness for the pool-level
// accuracy metric is always 0/1 on the argmax, independent of this choice.
inline std::vector<double> compute_losses(std::span<const SampleRecord> pool,
                                          LossKind kind) {
  std::vector<double> losses;
  losses.reserve(pool.size());
  for (const auto& rec : pool) {
    const ProbVector p(rec.main_probs);
    if (kind == LossKind::ZeroOne) {
      losses.push_back(argmax_index(p) == rec.gold_index ? 0.0 : 1.0);
    } else {
      losses.push_back(-std::log(std::max(p[rec.gold_index], kLogFloor)));
    }
  }
  return losses;
}

struct CellResult {
  std::string pool;
  AcqConfig acq;
  Estimator estimator = Estimator::Lure;
  std::size_t runs = 0;
  double true_risk = 0.0;
  ErrorCurve curve;
  double auc = 0.0;
  std::optional<double> gain_pct;  // vs the Random baseline, same estimator
  double pool_accuracy = 0.0;
  double pool_entropy_sigma = 0.0;
  std::optional<double> cond_auroc;
  std::string error;  // nonempty marks a failed cell

  bool failed() const { return !error.empty(); }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;  // pool-major, then function, then estimator
  bool any_failed = false;
};

namespace detail {

inline std::string fmt_double(double v) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

struct PoolData {
  std::string name;
  std::vector<SampleRecord> records;
  std::vector<ProbVector> mains;
  std::vector<std::optional<ProbVector>> surrogates;
  std::vector<double> losses;      // per loss_kind
  std::vector<double> zero_one;    // for accuracy / AUROC
  std::vector<double> entropies;
  double r_true = 0.0;
  double pool_accuracy = 0.0;
  double pool_entropy_sigma = 0.0;
  std::optional<double> cond_auroc;
};

inline PoolData load_pool_data(const std::filesystem::path& path,
                               LossKind loss_kind) {
  PoolData data;
  data.name = path.stem().string();
  data.records = load_pool(path);
  const std::size_t n = data.records.size();
  data.mains.reserve(n);
  data.surrogates.reserve(n);
  for (const auto& rec : data.records) {
    data.mains.emplace_back(rec.main_probs);
    if (rec.surrogate_probs)
      data.surrogates.emplace_back(ProbVector(*rec.surrogate_probs));
    else
      data.surrogates.emplace_back(std::nullopt);
    data.entropies.push_back(shannon_entropy(data.mains.back()));
  }
  data.losses = compute_losses(data.records, loss_kind);
  data.zero_one = compute_losses(data.records, LossKind::ZeroOne);
  data.r_true = empirical_risk(data.losses);
  data.pool_accuracy = accuracy(data.zero_one);
  data.pool_entropy_sigma = entropy_sigma(data.entropies);

  std::vector<ConfRecord> conf;
  conf.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    conf.push_back({max_prob(data.mains[i]), data.entropies[i],
                    data.zero_one[i] != 0.0});
  try {
    data.cond_auroc = conditional_auroc(conf);
  } catch (const Error&) {
    data.cond_auroc = std::nullopt;  // degenerate high-confidence subset
  }
  return data;
}

// Distinct output-file stems for the cells; pools with colliding stems get
// a numeric suffix so curve files never overwrite each other.
inline std::vector<std::string> unique_names(
    const std::vector<std::string>& names) {
  std::vector<std::string> out = names;
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t clash = 0;
    for (std::size_t j = 0; j < i; ++j)
      if (names[j] == names[i]) ++clash;
    if (clash > 0) out[i] += "_" + std::to_string(clash + 1);
  }
  return out;
}

}  // namespace detail

// Runs the full pool x function x run grid. Cell failures are captured in
// the returned report instead of aborting the sweep; numbers depend only on
// (config minus execution details), never on jobs or processing order.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentReport report;
  report.config = config;

  const std::size_t n_pools = config.pool_paths.size();
  const std::size_t n_funcs = config.functions.size();
  const std::size_t n_ests = config.estimators.size();
  const std::size_t n_budgets = config.budget_grid.size();

  // ---- load pools once ---------------------------------------------------
  std::vector<std::optional<detail::PoolData>> pools(n_pools);
  std::vector<std::string> pool_errors(n_pools);
  std::vector<std::string> raw_names(n_pools);
  for (std::size_t p = 0; p < n_pools; ++p) {
    raw_names[p] = config.pool_paths[p].stem().string();
    try {
      pools[p] = detail::load_pool_data(config.pool_paths[p],
                                        config.loss_kind);
    } catch (const Error& e) {
      pool_errors[p] = e.what();
    } catch (const std::exception& e) {
      pool_errors[p] = e.what();
    }
  }
  const std::vector<std::string> pool_names = detail::unique_names(raw_names);

  // ---- per (pool, function) fixed inputs ----------------------------------
  struct FuncPrep {
    std::vector<double> utilities;
    std::vector<double> pmf;
    std::string error;
  };
  std::vector<std::optional<ClusterAssignment>> assignments(n_pools);
  std::vector<std::string> assignment_errors(n_pools);
  std::vector<std::vector<FuncPrep>> preps(n_pools,
                                           std::vector<FuncPrep>(n_funcs));

  const bool wants_cluster = std::any_of(
      config.functions.begin(), config.functions.end(), [](const AcqConfig& a) {
        return a.function == AcqFunction::LmCluster;
      });

  for (std::size_t p = 0; p < n_pools; ++p) {
    if (!pools[p]) continue;
    const auto& pd = *pools[p];
    const std::size_t n = pd.records.size();

    if (wants_cluster) {
      try {
        std::vector<std::vector<double>> embeddings;
        embeddings.reserve(n);
        for (const auto& rec : pd.records) {
          if (!rec.embedding)
            fail(Errc::ValidationError,
                 "record '" + rec.id + "' has no embedding");
          embeddings.push_back(*rec.embedding);
        }
        const std::size_t k =
            config.cluster_k ? *config.cluster_k : default_cluster_count(n);
        const std::uint64_t seed = mix_seed(
            config.master_seed, fnv1a("kmeans"), fnv1a(raw_names[p]));
        assignments[p] = balanced_kmeans(embeddings, k, seed);
      } catch (const Error& e) {
        assignment_errors[p] = e.what();
      }
    }

    for (std::size_t f = 0; f < n_funcs; ++f) {
      const AcqConfig& acq = config.functions[f];
      FuncPrep& prep = preps[p][f];
      try {
        if (acq.function == AcqFunction::LmCluster) {
          if (!assignment_errors[p].empty())
            fail(Errc::ValidationError, assignment_errors[p]);
          continue;  // two-stage draw consumes entropies directly
        }
        prep.utilities.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
          const ProbVector* surr =
              pd.surrogates[i] ? &*pd.surrogates[i] : nullptr;
          prep.utilities.push_back(
              acquisition_utility(acq, pd.mains[i], surr, n));
        }
        prep.pmf = utilities_to_pmf(prep.utilities, acq);
      } catch (const Error& e) {
        prep.error = e.what();
      }
    }
  }

  // ---- parallel phase: one (pool, function, run) per work item ------------
  struct RunSlot {
    // estimates[e][b]
    std::vector<std::vector<double>> estimates;
    std::vector<AcquisitionStep> trace;  // kept only when emitting traces
    std::string error;
  };
  std::vector<RunSlot> slots(n_pools * n_funcs * config.runs);
  auto slot_index = [&](std::size_t p, std::size_t f, std::size_t r) {
    return (p * n_funcs + f) * config.runs + r;
  };

  auto run_cell = [&](std::size_t item) {
    const std::size_t r = item % config.runs;
    const std::size_t f = (item / config.runs) % n_funcs;
    const std::size_t p = item / (config.runs * n_funcs);
    RunSlot& slot = slots[item];
    if (!pools[p]) {
      slot.error = pool_errors[p];
      return;
    }
    const auto& pd = *pools[p];
    const AcqConfig& acq = config.functions[f];
    const FuncPrep& prep = preps[p][f];
    if (!prep.error.empty()) {
      slot.error = prep.error;
      return;
    }
    try {
      const std::size_t n = pd.records.size();
      const std::size_t m_max = budget_to_count(config.budget_grid.back(), n);
      const std::uint64_t seed =
          mix_seed(config.master_seed, r, fnv1a(to_string(acq.function)));

      AcquisitionTrace trace;
      if (acq.function == AcqFunction::LmCluster) {
        trace = cluster_acquire(*assignments[p], pd.entropies, m_max, seed,
                                acq);
      } else {
        trace = draw_without_replacement(prep.pmf, m_max, seed, acq.function,
                                         prep.utilities);
      }

      slot.estimates.assign(n_ests, std::vector<double>(n_budgets, 0.0));
      for (std::size_t b = 0; b < n_budgets; ++b) {
        const std::size_t m = budget_to_count(config.budget_grid[b], n);
        const std::span<const AcquisitionStep> prefix(trace.steps.data(), m);
        for (std::size_t e = 0; e < n_ests; ++e) {
          switch (config.estimators[e]) {
            case Estimator::Lure:
              slot.estimates[e][b] =
                  lure_estimate(prefix, pd.losses, n).value;
              break;
            case Estimator::SubsetMean:
            case Estimator::BiasedClusterMean:
              slot.estimates[e][b] =
                  biased_mean_estimate(prefix, pd.losses).value;
              break;
            case Estimator::FullEmpirical:
              slot.estimates[e][b] = pd.r_true;
              break;
          }
        }
      }
      if (config.emit_traces) slot.trace = std::move(trace.steps);
    } catch (const Error& e) {
      slot.error = e.what();
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  };

  const std::size_t total = slots.size();
  auto item_at = [&](std::size_t i) {
    return config.reverse_cells ? total - 1 - i : i;
  };
  if (config.jobs <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(item_at(i));
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < total;
           i = next.fetch_add(1))
        run_cell(item_at(i));
    };
    std::vector<std::thread> threads;
    const std::size_t n_threads = std::min(config.jobs, total);
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // ---- deterministic aggregation ------------------------------------------
  for (std::size_t p = 0; p < n_pools; ++p) {
    for (std::size_t f = 0; f < n_funcs; ++f) {
      // a cell fails as a whole if any of its runs failed
      std::string cell_error;
      for (std::size_t r = 0; r < config.runs && cell_error.empty(); ++r)
        cell_error = slots[slot_index(p, f, r)].error;

      for (std::size_t e = 0; e < n_ests; ++e) {
        CellResult cell;
        cell.pool = pool_names[p];
        cell.acq = config.functions[f];
        cell.estimator = config.estimators[e];
        cell.runs = config.runs;
        cell.error = cell_error;
        if (pools[p]) {
          const auto& pd = *pools[p];
          cell.true_risk = pd.r_true;
          cell.pool_accuracy = pd.pool_accuracy;
          cell.pool_entropy_sigma = pd.pool_entropy_sigma;
          cell.cond_auroc = pd.cond_auroc;
        }
        if (cell_error.empty()) {
          std::vector<std::vector<double>> by_run(config.runs);
          for (std::size_t r = 0; r < config.runs; ++r)
            by_run[r] = slots[slot_index(p, f, r)].estimates[e];
          cell.curve = estimation_error_curve(by_run, config.budget_grid,
                                              pools[p]->r_true);
          cell.auc = auc_trapezoid(cell.curve);
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }

  // ---- gains vs the Random baseline ---------------------------------------
  for (std::size_t p = 0; p < n_pools; ++p) {
    for (std::size_t e = 0; e < n_ests; ++e) {
      const CellResult* baseline = nullptr;
      for (const auto& cell : report.cells)
        if (cell.pool == pool_names[p] &&
            cell.acq.function == AcqFunction::Random &&
            cell.estimator == config.estimators[e] && !cell.failed()) {
          baseline = &cell;
          break;
        }
      if (!baseline || !(baseline->auc > 0.0)) continue;
      for (auto& cell : report.cells)
        if (cell.pool == pool_names[p] &&
            cell.estimator == config.estimators[e] &&
            cell.acq.function != AcqFunction::Random && !cell.failed())
          cell.gain_pct = performance_gain(baseline->auc, cell.auc);
    }
  }

  report.any_failed =
      std::any_of(report.cells.begin(), report.cells.end(),
                  [](const CellResult& c) { return c.failed(); });

  // ---- trace emission (deterministic order) --------------------------------
  if (config.emit_traces) {
    const auto trace_dir = config.output_dir / "traces";
    std::filesystem::create_directories(trace_dir);
    for (std::size_t p = 0; p < n_pools; ++p)
      for (std::size_t f = 0; f < n_funcs; ++f)
        for (std::size_t r = 0; r < config.runs; ++r) {
          const RunSlot& slot = slots[slot_index(p, f, r)];
          if (!slot.error.empty()) continue;
          const std::string name =
              pool_names[p] + "_" +
              to_string(config.functions[f].function) + "_run" +
              std::to_string(r) + ".jsonl";
          std::ofstream out(trace_dir / name, std::ios::binary);
          for (const auto& s : slot.trace) {
            nlohmann::json line;
            line["step"] = s.step;
            line["sample_index"] = s.sample_index;
            line["acq_prob"] = s.acq_prob;
            line["utility"] = s.utility;
            out << line.dump() << '\n';
          }
        }
  }

  return report;
}

namespace detail {

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  // echoes the experiment identity; execution and placement details (jobs,
  // reverse_cells, output_dir) are omitted because they never affect the
  // emitted numbers
  nlohmann::json j;
  j["pool_paths"] = nlohmann::json::array();
  for (const auto& p : cfg.pool_paths) j["pool_paths"].push_back(p.string());
  j["functions"] = nlohmann::json::array();
  for (const auto& f : cfg.functions) {
    nlohmann::json fj;
    fj["function"] = to_string(f.function);
    fj["w1"] = f.w1;
    fj["w2"] = f.w2;
    if (f.ucb_beta_override) fj["ucb_beta_override"] = *f.ucb_beta_override;
    fj["pmf_floor"] = f.pmf_floor;
    j["functions"].push_back(fj);
  }
  j["strategy"] = to_string(cfg.strategy);
  j["estimators"] = nlohmann::json::array();
  for (const auto& e : cfg.estimators)
    j["estimators"].push_back(to_string(e));
  j["runs"] = cfg.runs;
  j["master_seed"] = cfg.master_seed;
  j["budget_grid"] = cfg.budget_grid;
  j["loss_kind"] = to_string(cfg.loss_kind);
  j["emit_traces"] = cfg.emit_traces;
  if (cfg.cluster_k) j["cluster_k"] = *cfg.cluster_k;
  return j;
}

}  // namespace detail

// Writes report.csv, report.json and curves/*.tsv under config.output_dir.
// The format switches drop one of the two report files; curves are always
// written since both formats reference them.
inline void write_report(const ExperimentReport& report, bool write_csv = true,
                         bool write_json = true) {
  namespace fs = std::filesystem;
  const auto& dir = report.config.output_dir;
  fs::create_directories(dir);
  fs::create_directories(dir / "curves");
  const bool tag_estimator = report.config.estimators.size() > 1;

  // report.csv: one row per pool x function x estimator
  if (write_csv) {
    std::ofstream csv(dir / "report.csv", std::ios::binary);
    csv << "pool,function,estimator,runs,true_risk,auc,gain_vs_random_pct,"
           "mean_run_variance,accuracy,entropy_sigma,cond_auroc,error\n";
    for (const auto& cell : report.cells) {
      csv << cell.pool << ',' << to_string(cell.acq.function) << ','
          << to_string(cell.estimator) << ',' << cell.runs << ',';
      if (cell.failed()) {
        std::string msg = cell.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        csv << ",,,,,,," << msg << '\n';
        continue;
      }
      csv << detail::fmt_double(cell.true_risk) << ','
          << detail::fmt_double(cell.auc) << ',';
      if (cell.gain_pct) csv << detail::fmt_double(*cell.gain_pct);
      csv << ',';
      double mean_var = 0.0;
      for (double v : cell.curve.run_variance) mean_var += v;
      if (!cell.curve.run_variance.empty())
        mean_var /= static_cast<double>(cell.curve.run_variance.size());
      csv << detail::fmt_double(mean_var) << ','
          << detail::fmt_double(cell.pool_accuracy) << ','
          << detail::fmt_double(cell.pool_entropy_sigma) << ',';
      if (cell.cond_auroc) csv << detail::fmt_double(*cell.cond_auroc);
      csv << ",\n";
    }
  }

  // report.json: config echo plus full curves
  if (write_json) {
    nlohmann::json j;
    j["config"] = detail::config_to_json(report.config);
    j["any_failed"] = report.any_failed;
    j["cells"] = nlohmann::json::array();
    for (const auto& cell : report.cells) {
      nlohmann::json cj;
      cj["pool"] = cell.pool;
      cj["function"] = to_string(cell.acq.function);
      cj["estimator"] = to_string(cell.estimator);
      cj["runs"] = cell.runs;
      if (cell.failed()) {
        cj["error"] = cell.error;
      } else {
        cj["true_risk"] = cell.true_risk;
        cj["auc"] = cell.auc;
        if (cell.gain_pct) cj["gain_vs_random_pct"] = *cell.gain_pct;
        cj["accuracy"] = cell.pool_accuracy;
        cj["entropy_sigma"] = cell.pool_entropy_sigma;
        if (cell.cond_auroc) cj["cond_auroc"] = *cell.cond_auroc;
        cj["curve"] = {{"budgets", cell.curve.budgets},
                       {"mean_sq_error", cell.curve.mean_sq_error},
                       {"run_variance", cell.curve.run_variance}};
      }
      j["cells"].push_back(cj);
    }
    std::ofstream out(dir / "report.json", std::ios::binary);
    out << j.dump(2) << '\n';
  }

  // curves/<pool>_<function>[_<estimator>].tsv: budget fraction, mean SE
  for (const auto& cell : report.cells) {
    if (cell.failed()) continue;
    std::string name = cell.pool + "_" + to_string(cell.acq.function);
    if (tag_estimator) name += std::string("_") + to_string(cell.estimator);
    std::ofstream tsv(dir / "curves" / (name + ".tsv"), std::ios::binary);
    for (std::size_t b = 0; b < cell.curve.budgets.size(); ++b)
      tsv << detail::fmt_double(cell.curve.budgets[b]) << '\t'
          << detail::fmt_double(cell.curve.mean_sq_error[b]) << '\n';
  }
}

}  // namespace gat
