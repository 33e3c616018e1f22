#include <CLI11.hpp>

#include "saddle/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Proximal point method and saddle-envelope experiment runner"};
  app.require_subcommand(1);

  std::string config_path, suite;
  saddle::CliOverrides ov;
  std::string out_dir, format;
  int workers = 0;
  std::uint64_t seed = 0;
  bool lyapunov = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "experiment config file")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--workers", workers, "worker threads (overrides config)");
    cmd->add_option("--seed", seed, "seed (overrides config)");
    cmd->add_flag("--lyapunov", lyapunov,
                  "record the Lyapunov column (two inner solves per step)");
    cmd->add_option("--format", format, "trajectory file format: csv|json");
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment per initial point");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep, true);
  CLI::App* check = app.add_subcommand("check", "run a named invariant suite");
  check->add_option("suite", suite, "suite name")->required();
  add_common(check, false);

  CLI11_PARSE(app, argc, argv);

  if (!out_dir.empty()) ov.out_dir = out_dir;
  if (workers > 0) ov.workers = workers;
  for (CLI::App* cmd : {run, sweep, check})
    if (cmd->parsed() && cmd->count("--seed")) ov.seed = seed;
  if (lyapunov) ov.lyapunov = true;
  if (!format.empty()) ov.format = format;

  if (run->parsed()) return saddle::cmd_run(config_path, ov);
  if (sweep->parsed()) return saddle::cmd_sweep(config_path, ov);
  return saddle::cmd_check(suite, ov);
}
