// Side-by-side look at the toolkit's core trade-offs on one synthetic pool:
//  - acquisition: random vs self-entropy vs uniform-blend cross-entropy
//  - estimation: debiased (importance-weighted) vs plain subset mean
// Prints a small table of estimation-error AUCs; lower is better. The pool
// is deliberately overconfident (most errors hide behind confidence >= 0.9)
// so entropy-guided picking underperforms the uniform-blend variant.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>

#include "gat/data_io.hpp"
#include "gat/harness.hpp"

namespace fs = std::filesystem;
using namespace gat;

int main() {
  const fs::path dir =
      fs::temp_directory_path() /
      ("gat_demo_" +
       std::to_string(
           std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(dir);

  SyntheticScenario sc;
  sc.kind = SyntheticKind::MiscalibratedOverconfident;
  sc.n = 500;
  sc.k = 2;
  sc.error_rate = 0.3;
  sc.overconfident_fraction = 0.6;
  sc.seed = 42;
  const fs::path pool = dir / "overconfident.jsonl";
  write_pool(pool, generate_synthetic(sc));

  ExperimentConfig cfg;
  cfg.pool_paths = {pool};
  cfg.functions = {AcqConfig{.function = AcqFunction::Random},
                   AcqConfig{.function = AcqFunction::SelfEntropy},
                   AcqConfig{.function = AcqFunction::UniformLmCe}};
  cfg.estimators = {Estimator::Lure, Estimator::SubsetMean};
  cfg.runs = 50;
  cfg.master_seed = 42;

  const auto report = run_experiment(cfg);
  fs::remove_all(dir);

  std::printf("pool: overconfident synthetic, n=%zu, true risk %.3f\n", sc.n,
              report.cells.front().true_risk);
  std::printf("%-16s %-12s %12s %14s\n", "function", "estimator", "auc",
              "gain vs rand");
  for (const auto& cell : report.cells) {
    if (cell.failed()) {
      std::printf("%-16s %-12s failed: %s\n", to_string(cell.acq.function),
                  to_string(cell.estimator), cell.error.c_str());
      continue;
    }
    if (cell.gain_pct)
      std::printf("%-16s %-12s %12.3e %+13.1f%%\n",
                  to_string(cell.acq.function), to_string(cell.estimator),
                  cell.auc, *cell.gain_pct);
    else
      std::printf("%-16s %-12s %12.3e %14s\n", to_string(cell.acq.function),
                  to_string(cell.estimator), cell.auc, "baseline");
  }
  std::printf(
      "\nnote the subset-mean rows: cheap, but the entropy-guided ones sit\n"
      "far from the truth because nothing corrects the selection bias.\n");
  return 0;
}
