#pragma once

// Experiment orchestration and result export.
//
// Layout under output_dir:
//   index.json                    written once, after every run finished
//   run_000/norms.csv, summary.json   mode simulate, one directory per (alpha, beta)
//   semigroup.csv, summary.json       mode semigroup_verify
//   exponents.csv, summary.json       mode exponent_table
//   bootstrap.csv, summary.json       mode bootstrap_trace

#include <optional>
#include <string>
#include <vector>

#include "dampns/config.hpp"
#include "dampns/solver.hpp"

namespace dampns {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2, kExitIo = 3 };

struct RunStatus {
  std::string id;  // run_000, ...
  double alpha = 0.0;
  double beta = 0.0;
  bool ok = true;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunStatus> runs;
  std::string index_path;
  int exit_code() const;
};

// Executes the experiment and writes its artifacts. Validation problems
// throw ValidationError before anything is written; unwritable paths throw
// IoError. A failed simulation is recorded in its run directory (partial
// norms included) and reported through exit_code().
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers = 1);

// Worker count: the explicit value if given, else $DAMPNS_WORKERS, else 1.
unsigned resolve_workers(std::optional<unsigned> requested);

// CSV with header t,l2_sq,h_alpha_sq,l_beta1_pow,w_l2_sq and %.17g values.
// Missing w values are written as empty cells.
void export_norm_series(const NormSeries& series, const std::string& path);
void export_norm_series(const TrajectoryRecord& record, const std::string& path);
NormSeries import_norm_series(const std::string& path);

}  // namespace dampns
