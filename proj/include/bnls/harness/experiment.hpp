#pragma once

#include "bnls/harness/config.hpp"
#include "bnls/harness/csv.hpp"

#include <string>
#include <vector>

namespace bnls {

enum ExitCode { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_acceptance = 4 };

[[nodiscard]] const char* code_version();

// Record times for a run: t_final * k / samples, or geometric from t_final/100.
[[nodiscard]] std::vector<double> sample_times(const ExperimentConfig& c);

// Lattice extent used by a run: lattice.extent, or sized so that signals
// from the observed region cannot wrap within t_final.
[[nodiscard]] int lattice_extent_for(const ExperimentConfig& c);

struct SeriesResult {
  CsvTable table;
  std::vector<std::string> warnings;
  // Secondary tables written as <dir>/<name>.csv, e.g. lattice window averages.
  std::vector<std::pair<std::string, CsvTable>> extra;
};

// The engine run behind run_experiment, without any file output. A pure
// function of the config.
[[nodiscard]] SeriesResult compute_series(const ExperimentConfig& c);

struct RunSummary {
  std::string dir;
  std::string csv_path;
  CsvTable table;
  std::vector<std::string> warnings;
  std::vector<std::string> extra_csv;
  double wall_seconds = 0.0;
};

// Writes <dir>/<engine>.csv, any extra tables, <dir>/run.json (config echo, code version, wall
// time, warnings) and, with output.plot, <dir>/<engine>.svg and .dat.
// dir defaults to c.output.dir when empty.
RunSummary run_experiment(const ExperimentConfig& c, const std::string& dir = "");

// One config per element of the cross product of the non-empty sweep lists,
// in lexicographic order (radii, x0, t0, seeds).
[[nodiscard]] std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& c);

struct SweepSummary {
  std::string dir;
  CsvTable table;  // sweep_csv_schema(), one row per case in case order
  std::vector<std::string> warnings;
};

// Cases run on up to `workers` threads, each into <dir>/case_NNN; the summary
// goes to <dir>/sweep.csv. Output does not depend on the worker count.
SweepSummary run_sweep(const ExperimentConfig& c, const std::string& dir, unsigned workers);

// Kernel table at t_final for linear.kernel and linear.half_width, as n, re, im.
[[nodiscard]] CsvTable kernel_csv(const ExperimentConfig& c);

} // namespace bnls
