// Command-line surface: run experiment grids, adapt pools to the binary
// verification task, generate synthetic pools, validate pool files.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gat/adaptation.hpp"
#include "gat/data_io.hpp"
#include "gat/harness.hpp"
#include "gat/scorer.hpp"

namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string functions_csv;
  std::string format;  // "", "csv" or "json"
  std::optional<std::size_t> jobs;
  bool emit_traces = false;
  bool reverse_cells = false;
};

struct AdaptArgs {
  std::string pool_path;
  std::string strategy = "runnerup";
  std::string out_path;
  bool cache_only = false;
  std::string cache_dir;
  std::string model = gat::RemoteConfig{}.model;
  std::size_t jobs = 1;
};

struct SynthArgs {
  std::string scenario;
  std::size_t n = 100;
  std::size_t k = 2;
  double error_rate = 0.3;
  std::uint64_t seed = 42;
  double overconfident_fraction = 0.6;
  std::string out_path;
};

struct ValidateArgs {
  std::string pool_path;
};

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string::npos ? csv.size() : comma;
    if (end > start) out.push_back(csv.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int do_run(const RunArgs& args) {
  gat::ExperimentConfig cfg = gat::load_config(args.config_path);
  if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.runs) cfg.runs = *args.runs;
  if (args.jobs) cfg.jobs = *args.jobs;
  if (args.emit_traces) cfg.emit_traces = true;
  if (args.reverse_cells) cfg.reverse_cells = true;
  if (!args.functions_csv.empty()) {
    cfg.functions.clear();
    for (const auto& token : split_csv(args.functions_csv))
      cfg.functions.push_back(
          gat::AcqConfig{.function = gat::parse_acq_function(token)});
    gat::validate_config(cfg);
  }

  gat::ExperimentReport report = gat::run_experiment(cfg);
  const bool write_csv = args.format != "json";
  const bool write_json = args.format != "csv";
  gat::write_report(report, write_csv, write_json);

  for (const auto& cell : report.cells) {
    if (cell.failed()) {
      std::cerr << cell.pool << " " << gat::to_string(cell.acq.function)
                << " " << gat::to_string(cell.estimator)
                << " FAILED: " << cell.error << "\n";
      continue;
    }
    std::cout << cell.pool << " " << gat::to_string(cell.acq.function) << " "
              << gat::to_string(cell.estimator)
              << " auc=" << gat::detail::fmt_double(cell.auc);
    if (cell.gain_pct)
      std::cout << " gain_vs_random="
                << gat::detail::fmt_double(*cell.gain_pct) << "%";
    std::cout << "\n";
  }
  std::cout << "report written to " << cfg.output_dir.string() << "\n";
  return report.any_failed ? 1 : 0;
}

int do_adapt(const AdaptArgs& args) {
  auto pool = gat::load_pool(args.pool_path);
  const gat::OracleStrategy strategy = gat::parse_strategy(args.strategy);

  fs::path cache_dir = args.cache_dir.empty() ? gat::cache_dir_from_env()
                                              : fs::path(args.cache_dir);
  gat::RemoteConfig remote = gat::remote_config_from_env();
  remote.model = args.model;
  const auto mode = args.cache_only ? gat::ProviderMode::CacheOnly
                                    : gat::ProviderMode::RemoteThenCache;
  // CacheOnly still takes the config so cache keys carry the model id.
  gat::NlvProvider provider(cache_dir, mode, remote);

  auto result = gat::adapt_pool(pool, strategy, provider.as_scorer(),
                                gat::Reformatter{}, args.jobs);
  for (const auto& [id, reason] : result.excluded)
    std::cerr << "excluded " << id << ": " << reason << "\n";
  std::cout << "adapted " << result.records.size() << "/" << pool.size()
            << " records (" << result.excluded.size() << " excluded)\n";
  if (result.records.empty()) {
    std::cerr << "no records could be adapted\n";
    return 1;
  }

  fs::path out = args.out_path.empty()
                     ? fs::path(args.pool_path).replace_extension()
                           .concat("_nlv.jsonl")
                     : fs::path(args.out_path);
  gat::write_pool(out, result.records);
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int do_synth(const SynthArgs& args) {
  gat::SyntheticScenario sc;
  sc.kind = gat::parse_synthetic_kind(args.scenario);
  sc.n = args.n;
  sc.k = args.k;
  sc.error_rate = args.error_rate;
  sc.seed = args.seed;
  sc.overconfident_fraction = args.overconfident_fraction;
  auto pool = gat::generate_synthetic(sc);

  fs::path out = args.out_path.empty()
                     ? fs::path(args.scenario + "_pool.jsonl")
                     : fs::path(args.out_path);
  gat::write_pool(out, pool);
  std::cout << "wrote " << pool.size() << " records to " << out.string()
            << "\n";
  return 0;
}

int do_validate(const ValidateArgs& args) {
  auto problems = gat::validate_pool(args.pool_path);
  for (const auto& p : problems) std::cout << p << "\n";
  if (problems.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  std::cout << problems.size() << " problem(s) found\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active-testing toolkit: budgeted risk estimation with "
               "acquisition functions, debiased estimates and task "
               "adaptation"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand(
      "run", "run an acquisition x estimator x pool experiment grid");
  run_cmd->add_option("--config", run_args.config_path,
                      "experiment config (JSON)")
      ->required();
  run_cmd->add_option("--output-dir", run_args.output_dir,
                      "override the config's output directory");
  run_cmd->add_option("--seed", run_args.seed, "override master_seed");
  run_cmd->add_option("--runs", run_args.runs, "override run count");
  run_cmd->add_option("--functions", run_args.functions_csv,
                      "override acquisition functions (CSV of tokens)");
  run_cmd->add_option("--format", run_args.format,
                      "report format to write (default: both)")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--jobs", run_args.jobs, "parallel cell workers");
  run_cmd->add_flag("--emit-traces", run_args.emit_traces,
                    "write per-run acquisition traces (JSON Lines)");
  run_cmd
      ->add_flag("--reverse-cells", run_args.reverse_cells,
                 "process cells in reverse order (output must not change)")
      ->group("");  // hidden; exists for order-independence checks

  AdaptArgs adapt_args;
  auto* adapt_cmd = app.add_subcommand(
      "adapt", "convert a multiple-choice pool to binary verification");
  adapt_cmd->add_option("--pool", adapt_args.pool_path, "input pool (JSONL)")
      ->required();
  adapt_cmd
      ->add_option("--strategy", adapt_args.strategy,
                   "which option becomes the claim")
      ->check(CLI::IsMember({"mostconf", "leastconf", "runnerup"}));
  adapt_cmd->add_option("--out", adapt_args.out_path,
                        "output pool path (default: <pool>_nlv.jsonl)");
  adapt_cmd->add_flag("--cache-only", adapt_args.cache_only,
                      "serve verification scores from the cache only");
  adapt_cmd->add_option("--cache-dir", adapt_args.cache_dir,
                        "score cache directory (default: GAT_CACHE_DIR or "
                        ".gat_cache)");
  adapt_cmd->add_option("--model", adapt_args.model,
                        "model id used in requests and cache keys");
  adapt_cmd->add_option("--jobs", adapt_args.jobs, "parallel scoring workers");

  SynthArgs synth_args;
  auto* synth_cmd =
      app.add_subcommand("synth", "generate a synthetic prediction pool");
  synth_cmd
      ->add_option("--scenario", synth_args.scenario,
                   "calibrated | overconfident | uniform")
      ->required();
  synth_cmd->add_option("--n", synth_args.n, "pool size");
  synth_cmd->add_option("--k", synth_args.k, "options per question");
  synth_cmd->add_option("--error-rate", synth_args.error_rate,
                        "fraction of wrong predictions");
  synth_cmd->add_option("--seed", synth_args.seed, "generator seed");
  synth_cmd->add_option("--overconfident-fraction",
                        synth_args.overconfident_fraction,
                        "share of errors made with high confidence "
                        "(overconfident scenario)");
  synth_cmd->add_option("--out", synth_args.out_path,
                        "output path (default: <scenario>_pool.jsonl)");

  ValidateArgs validate_args;
  auto* validate_cmd =
      app.add_subcommand("validate", "check a pool file and list problems");
  validate_cmd
      ->add_option("--pool", validate_args.pool_path, "pool file (JSONL)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message and usage hint
    return 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(run_args);
    if (adapt_cmd->parsed()) return do_adapt(adapt_args);
    if (synth_cmd->parsed()) return do_synth(synth_args);
    if (validate_cmd->parsed()) return do_validate(validate_args);
  } catch (const gat::Error& e) {
    std::cerr << "error [" << gat::to_string(e.code()) << "]: " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // no subcommand ran
}
