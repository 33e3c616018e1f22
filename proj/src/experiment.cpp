#include "saddle/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "saddle/checks.hpp"

namespace saddle {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_key(const std::string& section, const std::string& key,
                          const std::string& why) {
  throw ConfigError("config error: [" + section + "] " + key + ": " + why);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    bad_key(section, key, "expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& section, const std::string& key,
              const std::string& v) {
  const double d = parse_double(section, key, v);
  if (d != std::floor(d)) bad_key(section, key, "expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_key(section, key, "expected true/false, got '" + v + "'");
}

std::vector<double> parse_numbers(const std::string& section, const std::string& key,
                                  const std::string& v) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(section, key, tok));
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  bool have_problem = false;

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config error: line " + std::to_string(lineno) +
                          ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      static const std::vector<std::string> known = {
          "problem", "algorithm", "init", "classify", "sweep", "output", "run"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigError("config error: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config error: line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config error: key '" + key + "' outside any section");

    if (section == "problem") {
      if (key == "name") {
        cfg.problem_name = val;
        have_problem = true;
      } else {
        cfg.problem_params[key] = parse_double(section, key, val);
      }
    } else if (section == "algorithm") {
      if (key == "scheme") {
        try {
          cfg.algo.scheme = scheme_from_name(val);
        } catch (const Error& e) {
          bad_key(section, key, e.what());
        }
      } else if (key == "eta") cfg.algo.eta = parse_double(section, key, val);
      else if (key == "lambda") cfg.algo.lambda = parse_double(section, key, val);
      else if (key == "gamma") cfg.algo.gamma = parse_double(section, key, val);
      else if (key == "s") cfg.algo.s = parse_double(section, key, val);
      else if (key == "eta_x") cfg.algo.eta_x = parse_double(section, key, val);
      else if (key == "eta_y") cfg.algo.eta_y = parse_double(section, key, val);
      else if (key == "ybox") {
        auto v = parse_numbers(section, key, val);
        if (v.size() != 2 || !(v[0] < v[1]))
          bad_key(section, key, "expected 'lo hi' with lo < hi");
        cfg.algo.y_box = Box{v[0], v[1]};
      } else if (key == "max_iter") cfg.algo.max_iter = parse_int(section, key, val);
      else if (key == "grad_tol") cfg.algo.grad_tol = parse_double(section, key, val);
      else if (key == "diverge_radius")
        cfg.algo.diverge_radius = parse_double(section, key, val);
      else if (key == "inner_tol") cfg.algo.inner_tol = parse_double(section, key, val);
      else bad_key(section, key, "unknown key");
    } else if (section == "init") {
      if (key == "mode") {
        if (val == "points") cfg.init.mode = InitSpec::Mode::kPoints;
        else if (val == "grid") cfg.init.mode = InitSpec::Mode::kGrid;
        else if (val == "weak") cfg.init.mode = InitSpec::Mode::kWeak;
        else bad_key(section, key, "expected points|grid|weak");
      } else if (key == "box") {
        auto v = parse_numbers(section, key, val);
        if (v.size() != 2 || !(v[0] < v[1]))
          bad_key(section, key, "expected 'lo hi' with lo < hi");
        cfg.init.grid_box = Box{v[0], v[1]};
      } else if (key == "resolution") {
        cfg.init.resolution = parse_int(section, key, val);
        if (cfg.init.resolution < 1) bad_key(section, key, "resolution must be >= 1");
      } else if (key == "points") {
        cfg.init.points.clear();
        std::istringstream groups(val);
        std::string group;
        while (std::getline(groups, group, ';')) {
          group = trim(group);
          if (group.empty()) continue;
          auto nums = parse_numbers(section, key, group);
          cfg.init.points.push_back(
              Eigen::Map<Eigen::VectorXd>(nums.data(), nums.size()));
        }
      } else if (key == "zprime") {
        auto nums = parse_numbers(section, key, val);
        cfg.init.z_prime = Eigen::Map<Eigen::VectorXd>(nums.data(), nums.size());
      } else if (key == "weak_tol") {
        cfg.init.weak_tol = parse_double(section, key, val);
      } else bad_key(section, key, "unknown key");
    } else if (section == "classify") {
      if (key == "burn_in") cfg.classify.burn_in = parse_int(section, key, val);
      else if (key == "window") cfg.classify.window = parse_int(section, key, val);
      else if (key == "cycle_tol") cfg.classify.cycle_tol = parse_double(section, key, val);
      else bad_key(section, key, "unknown key");
    } else if (section == "sweep") {
      if (key == "parameter") {
        static const std::vector<std::string> ok = {"a", "lambda", "gamma", "eta", "s"};
        if (std::find(ok.begin(), ok.end(), val) == ok.end())
          bad_key(section, key, "expected one of a|lambda|gamma|eta|s");
        cfg.sweep.parameter = val;
      } else if (key == "values") {
        cfg.sweep.values = parse_numbers(section, key, val);
      } else bad_key(section, key, "unknown key");
    } else if (section == "output") {
      if (key == "directory") cfg.output.directory = val;
      else if (key == "format") {
        if (val != "csv" && val != "json") bad_key(section, key, "expected csv|json");
        cfg.output.format = val;
      } else if (key == "lyapunov") cfg.output.lyapunov = parse_bool(section, key, val);
      else bad_key(section, key, "unknown key");
    } else if (section == "run") {
      if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(section, key, val));
      else if (key == "workers") {
        cfg.workers = parse_int(section, key, val);
        if (cfg.workers < 1) bad_key(section, key, "workers must be >= 1");
      } else bad_key(section, key, "unknown key");
    }
  }
  if (!have_problem)
    throw ConfigError("config error: [problem] name: missing required key");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// ---------------------------------------------------------------------------
// Experiment runner

namespace {

std::vector<Eigen::VectorXd> expand_initial_points(const ExperimentConfig& cfg,
                                                   const AlgoConfig& algo,
                                                   const MinimaxProblem& p) {
  const Eigen::Index d = p.dim_x() + p.dim_y();
  std::vector<Eigen::VectorXd> pts;
  switch (cfg.init.mode) {
    case InitSpec::Mode::kPoints:
      for (const auto& v : cfg.init.points) {
        if (v.size() != d)
          throw ConfigError("config error: [init] points: point has " +
                            std::to_string(v.size()) + " coordinates, problem needs " +
                            std::to_string(d));
        pts.push_back(v);
      }
      break;
    case InitSpec::Mode::kGrid: {
      const int res = cfg.init.resolution;
      const double lo = cfg.init.grid_box.lo, hi = cfg.init.grid_box.hi;
      std::vector<double> axis(res);
      for (int i = 0; i < res; ++i)
        axis[i] = res == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (res - 1);
      std::vector<int> idx(d, 0);
      while (true) {
        Eigen::VectorXd v(d);
        for (Eigen::Index k = 0; k < d; ++k) v(k) = axis[idx[k]];
        pts.push_back(v);
        Eigen::Index k = 0;
        for (; k < d; ++k) {
          if (++idx[k] < res) break;
          idx[k] = 0;
        }
        if (k == d) break;
      }
      break;
    }
    case InitSpec::Mode::kWeak: {
      if (cfg.init.z_prime.size() != d)
        throw ConfigError("config error: [init] zprime: expected " +
                          std::to_string(d) + " coordinates");
      SplitPoint zp = SplitPoint::from_stacked(cfg.init.z_prime, p.dim_x());
      const double eta = algo.eta > 0.0 ? algo.eta : 1.0;
      SplitPoint z0 = init_weak(p, zp, eta, cfg.init.weak_tol);
      pts.push_back(z0.stacked());
      break;
    }
  }
  return pts;
}

std::shared_ptr<MinimaxProblem> build_problem(const ExperimentConfig& cfg,
                                              const std::string& sweep_param,
                                              double value) {
  auto params = cfg.problem_params;
  if (sweep_param == "a") params["a"] = value;
  try {
    return make_problem(cfg.problem_name, params);
  } catch (const Error& e) {
    throw ConfigError(std::string("config error: [problem] ") + e.what());
  }
}

AlgoConfig apply_sweep(const AlgoConfig& base, const std::string& param, double v) {
  AlgoConfig a = base;
  if (param == "lambda") a.lambda = v;
  else if (param == "gamma") a.gamma = v;
  else if (param == "eta") a.eta = v;
  else if (param == "s") a.s = v;
  return a;
}

double measured_contraction(const Trajectory& t) {
  // Geometric mean of per-step distance ratios over the tail of the run.
  const auto& s = t.step_norm;
  std::vector<double> pos;
  for (size_t i = 1; i < s.size(); ++i)
    if (s[i] > 0.0) pos.push_back(s[i]);
  if (pos.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const size_t w = std::min<size_t>(pos.size() - 1, 50);
  const double first = pos[pos.size() - 1 - w], last = pos.back();
  if (!(first > 0.0) || !(last > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return std::pow(last / first, 1.0 / static_cast<double>(w));
}

std::string trajectory_filename(const ExperimentConfig& cfg, int param_index,
                                int init_index) {
  char buf[64];
  if (param_index >= 0)
    std::snprintf(buf, sizeof(buf), "traj_p%02d_i%03d.%s", param_index, init_index,
                  cfg.output.format.c_str());
  else
    std::snprintf(buf, sizeof(buf), "traj_i%03d.%s", init_index,
                  cfg.output.format.c_str());
  return buf;
}

std::string render_trajectory_csv(const Trajectory& t, Eigen::Index n,
                                  Eigen::Index m, bool with_lyapunov) {
  std::string out;
  out += "iter";
  for (Eigen::Index i = 0; i < n; ++i) out += ",x_" + std::to_string(i);
  for (Eigen::Index j = 0; j < m; ++j) out += ",y_" + std::to_string(j);
  out += ",grad_norm,step_norm";
  if (with_lyapunov) out += ",lyapunov";
  out += "\n";
  for (size_t k = 0; k < t.iterates.size(); ++k) {
    out += std::to_string(k);
    for (Eigen::Index i = 0; i < n; ++i) out += "," + fmt_double(t.iterates[k].x(i));
    for (Eigen::Index j = 0; j < m; ++j) out += "," + fmt_double(t.iterates[k].y(j));
    out += "," + fmt_double(t.grad_norm[k]) + "," + fmt_double(t.step_norm[k]);
    if (with_lyapunov) out += "," + fmt_double(t.lyapunov[k]);
    out += "\n";
  }
  return out;
}

std::string render_trajectory_json(const Trajectory& t, Eigen::Index n,
                                   Eigen::Index m, bool with_lyapunov) {
  json cols = json::array();
  cols.push_back("iter");
  for (Eigen::Index i = 0; i < n; ++i) cols.push_back("x_" + std::to_string(i));
  for (Eigen::Index j = 0; j < m; ++j) cols.push_back("y_" + std::to_string(j));
  cols.push_back("grad_norm");
  cols.push_back("step_norm");
  if (with_lyapunov) cols.push_back("lyapunov");
  json rows = json::array();
  for (size_t k = 0; k < t.iterates.size(); ++k) {
    json row = json::array();
    row.push_back(k);
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(t.iterates[k].x(i));
    for (Eigen::Index j = 0; j < m; ++j) row.push_back(t.iterates[k].y(j));
    row.push_back(t.grad_norm[k]);
    row.push_back(t.step_norm[k]);
    if (with_lyapunov) row.push_back(t.lyapunov[k]);
    rows.push_back(std::move(row));
  }
  json doc;
  doc["columns"] = std::move(cols);
  doc["rows"] = std::move(rows);
  doc["termination"] = termination_name(t.termination);
  return doc.dump(2) + "\n";
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  struct Job {
    int param_index;
    double param_value;
    int init_index;
    Eigen::VectorXd init;
    std::shared_ptr<MinimaxProblem> problem;
    AlgoConfig algo;
  };

  const bool sweeping = !cfg.sweep.parameter.empty();
  if (sweeping && cfg.sweep.values.empty())
    throw ConfigError("config error: [sweep] values: empty sweep value list");

  std::vector<Job> jobs;
  const int n_params = sweeping ? static_cast<int>(cfg.sweep.values.size()) : 1;
  for (int pi = 0; pi < n_params; ++pi) {
    const double pv =
        sweeping ? cfg.sweep.values[pi] : std::numeric_limits<double>::quiet_NaN();
    auto problem = build_problem(cfg, sweeping ? cfg.sweep.parameter : "", pv);
    AlgoConfig algo = sweeping ? apply_sweep(cfg.algo, cfg.sweep.parameter, pv)
                               : cfg.algo;
    algo.record_lyapunov = cfg.output.lyapunov;
    const bool proximal_scheme =
        algo.scheme == Scheme::kPpm || algo.scheme == Scheme::kPpm2;
    if (proximal_scheme && algo.eta <= 0.0) {
      if (problem->rho() > 0.0)
        algo.eta = 2.0 * problem->rho();  // the default proximal parameter
      else
        throw ConfigError(
            "config error: [algorithm] eta: required (the 2*rho default needs "
            "rho > 0)");
    }
    auto inits = expand_initial_points(cfg, algo, *problem);
    for (int ii = 0; ii < static_cast<int>(inits.size()); ++ii)
      jobs.push_back({sweeping ? pi : -1, pv, ii, inits[ii], problem, algo});
  }

  fs::create_directories(cfg.output.directory);

  std::vector<RunRecord> records(jobs.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failure{false};

  auto worker = [&]() {
    while (true) {
      const size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      RunRecord rec;
      rec.param_index = job.param_index;
      rec.param_value = job.param_value;
      rec.init_index = job.init_index;
      rec.init = job.init;
      rec.trajectory_file =
          trajectory_filename(cfg, job.param_index, job.init_index);
      const MinimaxProblem& p = *job.problem;
      try {
        SplitPoint z0 = SplitPoint::from_stacked(job.init, p.dim_x());
        Trajectory t = run(p, job.algo, z0);
        const double grad_tol = job.algo.grad_tol > 0.0
                                    ? job.algo.grad_tol
                                    : 1e-8 * std::max(1.0, p.grad_norm(z0));
        rec.label = classify(t, grad_tol, cfg.classify.cycle_tol,
                             cfg.classify.burn_in, cfg.classify.window);
        rec.termination = t.termination;
        rec.iterations = t.steps();
        rec.final_grad_norm = t.final_grad_norm();
        rec.error_message = t.error_message;
        if (rec.label.tag == RegimeLabel::Tag::kConverged)
          rec.contraction_factor = measured_contraction(t);
        if (t.termination == Termination::kError) failure.store(true);
        const std::string body =
            cfg.output.format == "csv"
                ? render_trajectory_csv(t, p.dim_x(), p.dim_y(), cfg.output.lyapunov)
                : render_trajectory_json(t, p.dim_x(), p.dim_y(),
                                         cfg.output.lyapunov);
        std::ofstream out(fs::path(cfg.output.directory) / rec.trajectory_file,
                          std::ios::binary);
        out << body;
      } catch (const Error& e) {
        rec.termination = Termination::kError;
        rec.error_message = e.what();
        failure.store(true);
      }
      records[k] = std::move(rec);
    }
  };

  const int nw = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  if (nw <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Summary assembled in job order, which is (param_index, init_index) order.
  json summary = json::array();
  for (const auto& rec : records) {
    json r;
    r["param"] = sweeping ? json(cfg.sweep.parameter) : json(nullptr);
    r["param_value"] =
        std::isnan(rec.param_value) ? json(nullptr) : json(rec.param_value);
    r["init_index"] = rec.init_index;
    r["init"] = vector_to_json(rec.init);
    r["label"] = regime_name(rec.label.tag);
    if (rec.label.tag == RegimeLabel::Tag::kConverged)
      r["point"] = vector_to_json(rec.label.point.stacked());
    if (rec.label.tag == RegimeLabel::Tag::kCycle) {
      r["period_estimate"] = rec.label.period_estimate;
      r["radius_estimate"] = rec.label.radius_estimate;
      r["recurrence_dist"] = rec.label.recurrence_dist;
    }
    r["termination"] = termination_name(rec.termination);
    r["iterations"] = rec.iterations;
    r["final_grad_norm"] = rec.final_grad_norm;
    r["contraction_factor"] = std::isnan(rec.contraction_factor)
                                  ? json(nullptr)
                                  : json(rec.contraction_factor);
    r["trajectory_file"] = rec.trajectory_file;
    if (!rec.error_message.empty()) r["error"] = rec.error_message;
    summary.push_back(std::move(r));
  }

  ExperimentResult result;
  result.records = std::move(records);
  result.numerical_failure = failure.load();
  result.summary_path = (fs::path(cfg.output.directory) / "summary.json").string();
  std::ofstream out(result.summary_path, std::ios::binary);
  out << summary.dump(2) << "\n";
  return result;
}

// ---------------------------------------------------------------------------
// CLI command fronts

namespace {

ExperimentConfig load_with_overrides(const std::string& path, const CliOverrides& ov) {
  ExperimentConfig cfg = parse_config_file(path);
  if (ov.out_dir) cfg.output.directory = *ov.out_dir;
  if (ov.workers) cfg.workers = *ov.workers;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.lyapunov) cfg.output.lyapunov = *ov.lyapunov;
  if (ov.format) {
    if (*ov.format != "csv" && *ov.format != "json")
      throw ConfigError("config error: --format: expected csv|json");
    cfg.output.format = *ov.format;
  }
  return cfg;
}

int run_front(const std::string& config_path, const CliOverrides& ov, bool sweep) {
  try {
    ExperimentConfig cfg = load_with_overrides(config_path, ov);
    if (sweep && cfg.sweep.parameter.empty())
      throw ConfigError(
          "config error: [sweep] parameter: required for the sweep command");
    if (!sweep) cfg.sweep = SweepSpec{};  // plain run ignores any sweep section
    ExperimentResult res = run_experiment(cfg);
    std::cout << "wrote " << res.records.size() << " trajectories and "
              << res.summary_path << "\n";
    if (res.numerical_failure) {
      std::cerr << "numerical failure in at least one trajectory\n";
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int cmd_run(const std::string& config_path, const CliOverrides& ov) {
  return run_front(config_path, ov, false);
}

int cmd_sweep(const std::string& config_path, const CliOverrides& ov) {
  return run_front(config_path, ov, true);
}

int cmd_check(const std::string& suite, const CliOverrides& ov) {
  CheckReport report;
  try {
    report = run_check_suite(suite, ov.seed.value_or(0));
  } catch (const ParameterError& e) {
    std::cerr << e.what() << "\nknown suites:";
    for (const auto& s : check_suite_names()) std::cerr << " " << s;
    std::cerr << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  const std::string text = format_check_report(report);
  std::cout << text;
  const std::string dir = ov.out_dir.value_or(".");
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / (report.suite + "_report.txt"), std::ios::binary);
  out << text;
  return report.all_pass() ? 0 : 3;
}

}  // namespace saddle
