#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldg/diagnostics.hpp"
#include "ldg/dirk.hpp"

namespace ldg {

/// One experiment run, configured from a flat key=value file. Unset optional
/// fields fall back to the preset defaults.
struct RunConfig {
  std::string preset;
  std::optional<int> mesh;          // elements per axis
  std::optional<int> degree;
  std::optional<int> dirk_order;
  std::optional<double> alpha;      // tau0 = alpha * h
  std::optional<double> tau_max;    // default tau0
  std::optional<double> tau_min;    // default tau0 / 1024
  std::optional<double> t_final;
  std::optional<double> u_min;
  bool limiter = true;
  FluxChoice flux = FluxChoice::RightQLeftP;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  int hard_iteration_limit = 25;
  double boson_mass = 1.0;
  std::string output_dir = "out";
  unsigned long seed = 0;
};

RunConfig parse_config_file(const std::string& path);
/// Applies one "key=value" override; throws ConfigError on unknown keys or
/// unparseable values.
void apply_override(RunConfig& config, const std::string& assignment);
/// Canonical serialization, written verbatim as the run manifest.
std::string manifest_text(const RunConfig& config);

enum class RunStatus { Ok, Breakdown, SolverFailure };

struct RunResult {
  RunStatus status = RunStatus::Ok;
  std::string detail;
  std::vector<StepRecord> records;   // includes the t=0 record
  std::vector<double> max_u;         // max at constraint points, per record
  Vec U_final;
  double min_u_run = 0.0;            // min over all records
  double final_rate = 0.0;           // |U^{n+1}-U^n|_inf / tau at last step
  std::optional<ErrorNorms> errors;  // when the model has an exact solution
};

/// Executes the run and writes manifest.txt, steps.csv, final_state.csv and
/// status.txt into config.output_dir (partial outputs are flushed with a
/// failure marker when the run breaks down).
RunResult run(const RunConfig& config);

/// Convergence study: runs `meshes` (each double the previous), writing each
/// run under output_dir/M<mesh>/ and the assembled table to
/// output_dir/table.csv.
std::vector<ConvergenceRow> run_table(const RunConfig& base,
                                      const std::vector<int>& meshes);

struct CompareReport {
  std::vector<std::string> columns;  // steps.csv columns
  std::vector<double> deltas;        // max abs delta per column
  double final_state_delta = 0.0;
  long rows_a = 0, rows_b = 0;

  double max_delta() const;
  std::string format() const;
};

/// Column-wise comparison of two run directories; throws ConfigError when the
/// manifests disagree on the grid.
CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b);

}  // namespace ldg
