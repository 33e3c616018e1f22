#ifndef SADDLE_EXPERIMENT_HPP
#define SADDLE_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saddle/diagnostics.hpp"

namespace saddle {

struct ConfigError : Error {
  using Error::Error;
};

struct InitSpec {
  enum class Mode { kPoints, kGrid, kWeak };
  Mode mode = Mode::kGrid;
  std::vector<Eigen::VectorXd> points;  // stacked (x, y); split at run time
  Box grid_box{-3.5, 3.5};
  int resolution = 5;
  Eigen::VectorXd z_prime;  // weak mode start, stacked
  double weak_tol = 1e-8;
};

struct ClassifySpec {
  int burn_in = 500;
  int window = 400;
  double cycle_tol = -1.0;  // <= 0: auto
};

struct SweepSpec {
  std::string parameter;  // "a" | "lambda" | "gamma" | "eta" | "s"; empty = none
  std::vector<double> values;
};

struct OutputSpec {
  std::string directory = "out";
  std::string format = "csv";  // trajectory files: csv | json
  bool lyapunov = false;
};

struct ExperimentConfig {
  std::string problem_name;
  std::map<std::string, double> problem_params;
  AlgoConfig algo;
  InitSpec init;
  ClassifySpec classify;
  SweepSpec sweep;
  OutputSpec output;
  std::uint64_t seed = 0;
  int workers = 1;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct RunRecord {
  int param_index = -1;  // -1 when not sweeping
  double param_value = std::numeric_limits<double>::quiet_NaN();
  int init_index = 0;
  Eigen::VectorXd init;  // stacked
  RegimeLabel label;
  Termination termination = Termination::kBudget;
  int iterations = 0;
  double final_grad_norm = 0.0;
  // Geometric mean per-step distance ratio over the tail; NaN unless converged.
  double contraction_factor = std::numeric_limits<double>::quiet_NaN();
  std::string trajectory_file;
  std::string error_message;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::string summary_path;
  bool numerical_failure = false;
};

// Runs every (sweep value, initial point) job, writes one trajectory file per
// job plus summary.json into the output directory. Deterministic for a fixed
// config and seed regardless of worker count: records are ordered by
// (param_index, init_index) and all numbers are formatted identically.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Command fronts used by the CLI; return process exit codes
// (0 ok, 1 config error, 2 numerical failure, 3 invariant-suite failure).
struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<bool> lyapunov;
  std::optional<std::string> format;
};

int cmd_run(const std::string& config_path, const CliOverrides& ov = {});
int cmd_sweep(const std::string& config_path, const CliOverrides& ov = {});
int cmd_check(const std::string& suite, const CliOverrides& ov = {});

// Fixed-width round-trip double formatting used for all file output.
std::string fmt_double(double v);

}  // namespace saddle

#endif  // SADDLE_EXPERIMENT_HPP
