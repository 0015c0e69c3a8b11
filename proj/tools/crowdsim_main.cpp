// crowdsim: scene generation, crowd simulation runs, dynamics evaluation,
// scaling benchmark, and point-goal navigation evaluation.

#include <glob.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdsim/errors.hpp"
#include "crowdsim/integrator.hpp"
#include "crowdsim/metrics.hpp"
#include "crowdsim/navtask.hpp"
#include "crowdsim/parallel.hpp"
#include "crowdsim/scene.hpp"
#include "crowdsim/scene_gen.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace crowdsim;

// ---------------------------------------------------------------------------
// Shared plumbing

std::vector<std::string> glob_paths(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  if (rc == GLOB_NOMATCH) {
    globfree(&g);
    return {};
  }
  if (rc != 0) {
    globfree(&g);
    throw IoError("glob failed for pattern: " + pattern);
  }
  std::vector<std::string> out(g.gl_pathv, g.gl_pathv + g.gl_pathc);
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << content;
  if (!out) throw IoError("failed writing file: " + path.string());
}

// Report payload goes to --out when given, stdout otherwise.
void emit_report(const std::optional<std::string>& out_path, const std::string& payload) {
  if (out_path) {
    write_file(*out_path, payload);
  } else {
    std::cout << payload;
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    if (!j.is_object()) throw ParseError("config file must contain a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config file is not valid JSON: ") + e.what());
  }
}

// Flags win over config-file values; config fills in anything left unset.
struct ConfigOverlay {
  json values;

  template <typename T>
  void apply(const CLI::Option* opt, const char* key, T& var) const {
    if (opt != nullptr && opt->count() > 0) return;
    if (!values.contains(key)) return;
    try {
      var = values[key].get<T>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("config key \"") + key + "\": " + e.what());
    }
  }
};

SimParams params_from_json(const json& j) {
  SimParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "tau_adj") {
      p.tau_adj = value.get<double>();
    } else if (key == "tau_soc") {
      p.tau_soc = value.get<double>();
    } else if (key == "tau_rot") {
      p.tau_rot = value.get<double>();
    } else if (key == "k_soc") {
      p.k_soc = value.get<double>();
    } else if (key == "sigma_zeta") {
      p.sigma_zeta = value.get<double>();
    } else if (key == "sigma_eta") {
      p.sigma_eta = value.get<double>();
    } else if (key == "dt") {
      p.dt = value.get<double>();
    } else if (key == "v_max") {
      p.v_max = value.get<double>();
    } else if (key == "omega_max") {
      p.omega_max = value.get<double>();
    } else if (key == "contact") {
      for (const auto& [ckey, cvalue] : value.items()) {
        if (ckey == "k_normal") {
          p.contact.k_normal = cvalue.get<double>();
        } else if (ckey == "c_damp") {
          p.contact.c_damp = cvalue.get<double>();
        } else if (ckey == "mu") {
          p.contact.mu = cvalue.get<double>();
        } else {
          throw ParseError("unknown contact parameter \"" + ckey + "\"");
        }
      }
    } else {
      throw ParseError("unknown simulation parameter \"" + key + "\"");
    }
  }
  p.validate();
  return p;
}

SimParams params_from_config(const json& config) {
  if (config.contains("params")) return params_from_json(config["params"]);
  return SimParams{};
}

bool timing_enabled(const std::string& mode) {
  if (mode == "wall") return true;
  if (mode == "off") return false;
  throw ValidationError("--timing must be \"wall\" or \"off\"");
}

std::uint64_t task_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(base) ^ mix64(a * 0x9e37ULL + b + 1));
}

// ---------------------------------------------------------------------------
// gen-scenes

struct GenOpts {
  GeneratorConfig cfg;
  std::vector<double> density_range{0.1, 0.5};
  std::vector<double> area_range{10.0, 300.0};
  std::vector<int> obstacle_range{0, 3};
  std::string out_dir;
};

int cmd_gen_scenes(GenOpts& o) {
  if (o.density_range.size() != 2 || o.area_range.size() != 2 || o.obstacle_range.size() != 2) {
    throw ValidationError("ranges need exactly two values: min,max");
  }
  o.cfg.density_range = {o.density_range[0], o.density_range[1]};
  o.cfg.area_range = {o.area_range[0], o.area_range[1]};
  o.cfg.obstacle_count_range = {o.obstacle_range[0], o.obstacle_range[1]};

  const std::vector<Scene> scenes = generate_scenes(o.cfg);
  fs::create_directories(o.out_dir);
  for (const Scene& scene : scenes) {
    save_scene(scene, fs::path(o.out_dir) / (scene.name + ".json"));
  }
  std::cerr << "wrote " << scenes.size() << " scenes to " << o.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// run

struct RunOpts {
  std::string scene_path;
  int steps = 500;
  std::uint64_t seed = 0;
  std::string out_base;
  std::string timing = "wall";
  SimParams params;
};

int cmd_run(RunOpts& o) {
  if (o.steps < 0) throw ValidationError("--steps must be non-negative");
  const Scene scene = load_scene(o.scene_path);
  const RunResult result = run(scene, o.params, o.steps, o.seed);

  write_file(o.out_base + ".csv", trajectory_csv(result.log));
  write_file(o.out_base + ".events.json", events_json(result.log.events));
  if (timing_enabled(o.timing)) {
    write_file(o.out_base + ".timing.json",
               timing_json(result.log, static_cast<int>(scene.humans.size())));
  }
  std::cerr << "simulated " << o.steps << " steps of " << scene.humans.size() << " humans\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval-dynamics

struct EvalDynOpts {
  std::string scene_glob;
  int steps = 500;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::string format = "json";
  std::string timing = "wall";
  int jobs = 1;
  std::optional<std::string> dump_trajectories;
  SimParams params;
};

struct SceneDynResult {
  metrics::DynamicsRow row;
  long overlap_steps = 0;
  long reached = 0;
  double dynamics_seconds = 0.0;
};

int cmd_eval_dynamics(EvalDynOpts& o) {
  if (o.steps <= 0) throw ValidationError("--steps must be positive for eval-dynamics");
  const std::vector<std::string> paths = glob_paths(o.scene_glob);
  if (paths.empty()) throw ValidationError("no scenes match glob: " + o.scene_glob);

  std::vector<SceneDynResult> results(paths.size());
  parallel_for(paths.size(), o.jobs, [&](std::size_t i) {
    const Scene scene = load_scene(paths[i]);
    if (scene.humans.empty()) {
      throw ValidationError("scene " + scene.name + " has no humans to evaluate");
    }
    const RunResult r = run(scene, o.params, o.steps, task_seed(o.seed, i));
    SceneDynResult& out = results[i];
    out.row.scene = scene.name.empty() ? fs::path(paths[i]).stem().string() : scene.name;
    out.row.n_humans = static_cast<int>(scene.humans.size());
    out.row.steps = o.steps;
    out.row.car = metrics::car(r.log.events, o.steps);
    out.row.gr = metrics::gr(r.log.events, out.row.n_humans);
    out.row.mct_seconds = metrics::mct(r.log.step_dynamics_seconds, out.row.n_humans, o.steps);
    std::set<int> overlap_steps;
    std::set<int> reached;
    for (const SimEvent& e : r.log.events) {
      if (e.kind == SimEventKind::human_human_overlap) overlap_steps.insert(e.step);
      if (e.kind == SimEventKind::human_reached_destination) reached.insert(e.actors.at(0));
    }
    out.overlap_steps = static_cast<long>(overlap_steps.size());
    out.reached = static_cast<long>(reached.size());
    for (double s : r.log.step_dynamics_seconds) out.dynamics_seconds += s;
    if (o.dump_trajectories) {
      write_file(fs::path(*o.dump_trajectories) / (out.row.scene + ".csv"),
                 trajectory_csv(r.log));
    }
  });

  metrics::MetricsReport report;
  long total_steps = 0, total_overlap = 0, total_humans = 0, total_reached = 0;
  double total_seconds = 0.0, total_updates = 0.0;
  for (const SceneDynResult& r : results) {
    report.scenes.push_back(r.row);
    total_steps += r.row.steps;
    total_overlap += r.overlap_steps;
    total_humans += r.row.n_humans;
    total_reached += r.reached;
    total_seconds += r.dynamics_seconds;
    total_updates += static_cast<double>(r.row.steps) * r.row.n_humans;
  }
  report.car = 100.0 * (1.0 - static_cast<double>(total_overlap) / total_steps);
  report.gr = 100.0 * static_cast<double>(total_reached) / total_humans;
  report.mct_seconds = total_seconds / total_updates;

  const bool with_timing = timing_enabled(o.timing);
  const std::string payload = o.format == "csv" ? metrics::report_csv(report, with_timing)
                                                : metrics::report_json(report, with_timing);
  if (o.format != "csv" && o.format != "json") {
    throw ValidationError("--format must be \"csv\" or \"json\"");
  }
  emit_report(o.out, payload);
  if (*report.car < 100.0) {
    std::cerr << "warning: aggregate CAR " << *report.car << " < 100\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench-scaling

struct BenchOpts {
  std::vector<int> human_counts{5, 10, 20, 40};
  int trials = 5;
  int steps = 200;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::string format = "csv";
  std::string timing = "wall";
  int jobs = 1;
  double area = 100.0;
  SimParams params;
};

int cmd_bench_scaling(BenchOpts& o) {
  if (o.human_counts.empty()) throw ValidationError("--humans needs at least one count");
  for (std::size_t i = 1; i < o.human_counts.size(); ++i) {
    if (o.human_counts[i] <= o.human_counts[i - 1]) {
      throw ValidationError("--humans counts must be strictly increasing");
    }
  }
  if (o.trials < 1) throw ValidationError("--trials must be >= 1");
  if (o.steps <= 0) throw ValidationError("--steps must be positive");

  struct Task {
    int n;
    int trial;
  };
  std::vector<Task> tasks;
  for (int n : o.human_counts) {
    for (int t = 0; t < o.trials; ++t) tasks.push_back({n, t});
  }
  std::vector<double> mcts(tasks.size());
  parallel_for(tasks.size(), o.jobs, [&](std::size_t i) {
    const Task& task = tasks[i];
    const Scene scene = generate_fixed_area_scene(
        o.area, task.n, task_seed(o.seed, static_cast<std::uint64_t>(task.n)),
        "bench_n" + std::to_string(task.n));
    const RunResult r = run(scene, o.params, o.steps,
                            task_seed(o.seed, static_cast<std::uint64_t>(task.n),
                                      static_cast<std::uint64_t>(task.trial)));
    mcts[i] = metrics::mct(r.log.step_dynamics_seconds, task.n, o.steps);
  });

  struct Row {
    int n;
    double mean = 0.0;
    double stddev = 0.0;
  };
  std::vector<Row> rows;
  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 0; k < o.human_counts.size(); ++k) {
    Row row{o.human_counts[k]};
    double sum = 0.0;
    for (int t = 0; t < o.trials; ++t) sum += mcts[k * o.trials + t];
    row.mean = sum / o.trials;
    double var = 0.0;
    for (int t = 0; t < o.trials; ++t) {
      const double d = mcts[k * o.trials + t] - row.mean;
      var += d * d;
    }
    row.stddev = o.trials > 1 ? std::sqrt(var / (o.trials - 1)) : 0.0;
    rows.push_back(row);
    points.emplace_back(static_cast<double>(row.n), row.mean);
  }
  const metrics::LinearFit fit = metrics::least_squares(points);

  const bool with_timing = timing_enabled(o.timing);
  std::string payload;
  if (o.format == "csv") {
    std::ostringstream os;
    if (with_timing) {
      os << "n,mct_mean_seconds,mct_std_seconds\n";
      char buf[128];
      for (const Row& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g\n", r.n, r.mean, r.stddev);
        os << buf;
      }
      if (fit.ok) {
        char fbuf[160];
        std::snprintf(fbuf, sizeof(fbuf), "# fit slope=%.9g intercept=%.9g r2=%.9g\n", fit.slope,
                      fit.intercept, fit.r2);
        os << fbuf;
      } else {
        os << "# fit underdetermined\n";
      }
    } else {
      os << "n\n";
      for (const Row& r : rows) os << r.n << "\n";
    }
    payload = os.str();
  } else if (o.format == "json") {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const Row& r : rows) {
      nlohmann::ordered_json row;
      row["n"] = r.n;
      if (with_timing) {
        row["mct_mean_seconds"] = r.mean;
        row["mct_std_seconds"] = r.stddev;
      }
      j["rows"].push_back(row);
    }
    if (with_timing) {
      nlohmann::ordered_json fj;
      fj["ok"] = fit.ok;
      if (fit.ok) {
        fj["slope"] = fit.slope;
        fj["intercept"] = fit.intercept;
        fj["r2"] = fit.r2;
      }
      j["fit"] = fj;
    }
    payload = j.dump(2) + "\n";
  } else {
    throw ValidationError("--format must be \"csv\" or \"json\"");
  }
  emit_report(o.out, payload);
  return 0;
}

// ---------------------------------------------------------------------------
// eval-nav

struct EvalNavOpts {
  std::string scene_glob;
  std::string policy = "greedy";
  int episodes = -1;  // per scene; -1 = all
  std::uint64_t seed = 0;
  std::optional<double> rc;
  std::optional<std::string> out;
  std::string format = "json";
  int jobs = 1;
  std::optional<std::string> logs_dir;
  SimParams params;
};

int cmd_eval_nav(EvalNavOpts& o) {
  if (o.policy != "greedy" && o.policy != "random") {
    throw ValidationError("unknown policy \"" + o.policy + "\" (expected greedy or random)");
  }
  const std::vector<std::string> paths = glob_paths(o.scene_glob);
  if (paths.empty()) throw ValidationError("no scenes match glob: " + o.scene_glob);

  struct Task {
    std::size_t scene_idx;
    int episode;
  };
  std::vector<Scene> scenes;
  scenes.reserve(paths.size());
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    scenes.push_back(load_scene(paths[i]));
    const int available = static_cast<int>(scenes.back().episodes.size());
    if (available == 0) {
      throw ValidationError("scene " + scenes.back().name + " defines no episodes");
    }
    const int take = o.episodes < 0 ? available : std::min(o.episodes, available);
    for (int e = 0; e < take; ++e) tasks.push_back({i, e});
  }

  EnvConfig env_cfg;
  if (o.rc) env_cfg.reward.r_collision = *o.rc;

  std::vector<metrics::EpisodeRow> rows(tasks.size());
  std::vector<std::string> episode_logs(tasks.size());
  parallel_for(tasks.size(), o.jobs, [&](std::size_t i) {
    const Task& task = tasks[i];
    const Scene& scene = scenes[task.scene_idx];
    const EpisodeSpec& episode = scene.episodes[static_cast<std::size_t>(task.episode)];
    NavEnv env(scene, episode, o.params,
               task_seed(o.seed, task.scene_idx, static_cast<std::uint64_t>(task.episode)),
               env_cfg);
    RngStream policy_rng(task_seed(o.seed ^ 0xFACEULL, task.scene_idx,
                                   static_cast<std::uint64_t>(task.episode)));
    while (!env.done()) {
      const Action a =
          o.policy == "greedy" ? greedy_policy(env.observation()) : random_policy(policy_rng);
      env.step(a);
    }
    metrics::EpisodeRow& row = rows[i];
    row.scene = scene.name.empty() ? fs::path(paths[task.scene_idx]).stem().string() : scene.name;
    row.episode = task.episode;
    row.report = env.report();
    if (o.logs_dir) {
      std::ostringstream os;
      write_episode_log(os, env.log(), row.report);
      episode_logs[i] = os.str();
    }
  });

  if (o.logs_dir) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const fs::path p = fs::path(*o.logs_dir) /
                         (rows[i].scene + "_ep" + std::to_string(rows[i].episode) + ".jsonl");
      write_file(p, episode_logs[i]);
    }
  }

  metrics::MetricsReport report;
  report.episodes = rows;
  report.nav = metrics::aggregate_episodes(rows);
  if (o.format != "csv" && o.format != "json") {
    throw ValidationError("--format must be \"csv\" or \"json\"");
  }
  emit_report(o.out, o.format == "csv" ? metrics::report_csv(report, true)
                                       : metrics::report_json(report, true));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowdsim: 2D crowd dynamics simulator and navigation benchmark"};
  app.require_subcommand(1);

  GenOpts gen;
  RunOpts runo;
  EvalDynOpts evald;
  BenchOpts bench;
  EvalNavOpts evaln;
  std::string config_path;

  // --- gen-scenes
  auto* gen_cmd = app.add_subcommand("gen-scenes", "Generate procedural scene files");
  auto* gen_count = gen_cmd->add_option("--count", gen.cfg.count, "Number of scenes");
  auto* gen_seed = gen_cmd->add_option("--seed", gen.cfg.seed, "Generator seed");
  auto* gen_out = gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
  auto* gen_dens = gen_cmd->add_option("--densities", gen.cfg.densities,
                                       "Explicit per-scene densities (cycled)")
                       ->delimiter(',');
  auto* gen_drange =
      gen_cmd->add_option("--density-range", gen.density_range, "Density min,max")->delimiter(',');
  auto* gen_arange =
      gen_cmd->add_option("--area-range", gen.area_range, "Floor area min,max (m^2)")
          ->delimiter(',');
  auto* gen_orange =
      gen_cmd->add_option("--obstacles", gen.obstacle_range, "Obstacle count min,max")
          ->delimiter(',');
  auto* gen_eps = gen_cmd->add_option("--episodes", gen.cfg.episodes_per_scene,
                                      "Episodes per scene");
  auto* gen_prefix = gen_cmd->add_option("--prefix", gen.cfg.name_prefix, "Scene name prefix");
  gen_cmd->add_option("--config", config_path, "JSON config file (flags win)");

  // --- run
  auto* run_cmd = app.add_subcommand("run", "Simulate one scene and write trajectories");
  auto* run_scene = run_cmd->add_option("--scene", runo.scene_path, "Scene file")->required();
  auto* run_steps = run_cmd->add_option("--steps", runo.steps, "Steps to simulate");
  auto* run_seed = run_cmd->add_option("--seed", runo.seed, "Simulation seed");
  auto* run_out =
      run_cmd->add_option("--out", runo.out_base, "Output base path (.csv/.events.json)")
          ->required();
  auto* run_timing = run_cmd->add_option("--timing", runo.timing, "wall|off");
  run_cmd->add_option("--config", config_path, "JSON config file (flags win)");

  // --- eval-dynamics
  auto* evald_cmd = app.add_subcommand("eval-dynamics", "CAR/GR/mCT over a scene suite");
  auto* evald_glob =
      evald_cmd->add_option("--scene-glob", evald.scene_glob, "Scene file glob")->required();
  auto* evald_steps = evald_cmd->add_option("--steps", evald.steps, "Steps per scene");
  auto* evald_seed = evald_cmd->add_option("--seed", evald.seed, "Simulation seed");
  auto* evald_out = evald_cmd->add_option("--out", evald.out, "Report path (default stdout)");
  auto* evald_format = evald_cmd->add_option("--format", evald.format, "csv|json");
  auto* evald_jobs = evald_cmd->add_option("--jobs", evald.jobs, "Worker threads");
  auto* evald_timing = evald_cmd->add_option("--timing", evald.timing, "wall|off");
  evald_cmd->add_option("--dump-trajectories", evald.dump_trajectories,
                        "Directory for per-scene trajectory CSVs");
  evald_cmd->add_option("--config", config_path, "JSON config file (flags win)");

  // --- bench-scaling
  auto* bench_cmd = app.add_subcommand("bench-scaling", "mCT scaling over crowd sizes");
  auto* bench_humans =
      bench_cmd->add_option("--humans", bench.human_counts, "Crowd sizes, e.g. 5,10,20,40")
          ->delimiter(',');
  auto* bench_trials = bench_cmd->add_option("--trials", bench.trials, "Trials per size");
  auto* bench_steps = bench_cmd->add_option("--steps", bench.steps, "Steps per trial");
  auto* bench_seed = bench_cmd->add_option("--seed", bench.seed, "Benchmark seed");
  auto* bench_out = bench_cmd->add_option("--out", bench.out, "Report path (default stdout)");
  auto* bench_format = bench_cmd->add_option("--format", bench.format, "csv|json");
  auto* bench_jobs = bench_cmd->add_option("--jobs", bench.jobs, "Worker threads");
  auto* bench_timing = bench_cmd->add_option("--timing", bench.timing, "wall|off");
  auto* bench_area = bench_cmd->add_option("--area", bench.area, "Fixed floor area (m^2)");
  bench_cmd->add_option("--config", config_path, "JSON config file (flags win)");

  // --- eval-nav
  auto* evaln_cmd = app.add_subcommand("eval-nav", "Scripted-policy navigation evaluation");
  auto* evaln_glob =
      evaln_cmd->add_option("--scene-glob", evaln.scene_glob, "Scene file glob")->required();
  auto* evaln_policy = evaln_cmd->add_option("--policy", evaln.policy, "greedy|random");
  auto* evaln_eps =
      evaln_cmd->add_option("--episodes", evaln.episodes, "Episodes per scene (-1 = all)");
  auto* evaln_seed = evaln_cmd->add_option("--seed", evaln.seed, "Evaluation seed");
  auto* evaln_rc = evaln_cmd->add_option("--rc", evaln.rc, "Collision penalty override");
  auto* evaln_out = evaln_cmd->add_option("--out", evaln.out, "Report path (default stdout)");
  auto* evaln_format = evaln_cmd->add_option("--format", evaln.format, "csv|json");
  auto* evaln_jobs = evaln_cmd->add_option("--jobs", evaln.jobs, "Worker threads");
  evaln_cmd->add_option("--logs", evaln.logs_dir, "Directory for per-episode JSON-lines logs");
  evaln_cmd->add_option("--config", config_path, "JSON config file (flags win)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    app.exit(e);
    return 1;
  }

  try {
    ConfigOverlay overlay;
    if (!config_path.empty()) overlay.values = load_config(config_path);

    if (gen_cmd->parsed()) {
      overlay.apply(gen_count, "count", gen.cfg.count);
      overlay.apply(gen_seed, "seed", gen.cfg.seed);
      overlay.apply(gen_dens, "densities", gen.cfg.densities);
      overlay.apply(gen_drange, "density_range", gen.density_range);
      overlay.apply(gen_arange, "area_range", gen.area_range);
      overlay.apply(gen_orange, "obstacles", gen.obstacle_range);
      overlay.apply(gen_eps, "episodes", gen.cfg.episodes_per_scene);
      overlay.apply(gen_prefix, "prefix", gen.cfg.name_prefix);
      overlay.apply(gen_out, "out", gen.out_dir);
      return cmd_gen_scenes(gen);
    }
    if (run_cmd->parsed()) {
      overlay.apply(run_scene, "scene", runo.scene_path);
      overlay.apply(run_steps, "steps", runo.steps);
      overlay.apply(run_seed, "seed", runo.seed);
      overlay.apply(run_out, "out", runo.out_base);
      overlay.apply(run_timing, "timing", runo.timing);
      runo.params = params_from_config(overlay.values);
      return cmd_run(runo);
    }
    if (evald_cmd->parsed()) {
      overlay.apply(evald_glob, "scene_glob", evald.scene_glob);
      overlay.apply(evald_steps, "steps", evald.steps);
      overlay.apply(evald_seed, "seed", evald.seed);
      overlay.apply(evald_format, "format", evald.format);
      overlay.apply(evald_jobs, "jobs", evald.jobs);
      overlay.apply(evald_timing, "timing", evald.timing);
      if (!evald.out && overlay.values.contains("out")) {
        evald.out = overlay.values["out"].get<std::string>();
      }
      evald.params = params_from_config(overlay.values);
      return cmd_eval_dynamics(evald);
    }
    if (bench_cmd->parsed()) {
      overlay.apply(bench_humans, "humans", bench.human_counts);
      overlay.apply(bench_trials, "trials", bench.trials);
      overlay.apply(bench_steps, "steps", bench.steps);
      overlay.apply(bench_seed, "seed", bench.seed);
      overlay.apply(bench_format, "format", bench.format);
      overlay.apply(bench_jobs, "jobs", bench.jobs);
      overlay.apply(bench_timing, "timing", bench.timing);
      overlay.apply(bench_area, "area", bench.area);
      if (!bench.out && overlay.values.contains("out")) {
        bench.out = overlay.values["out"].get<std::string>();
      }
      bench.params = params_from_config(overlay.values);
      return cmd_bench_scaling(bench);
    }
    if (evaln_cmd->parsed()) {
      overlay.apply(evaln_glob, "scene_glob", evaln.scene_glob);
      overlay.apply(evaln_policy, "policy", evaln.policy);
      overlay.apply(evaln_eps, "episodes", evaln.episodes);
      overlay.apply(evaln_seed, "seed", evaln.seed);
      overlay.apply(evaln_format, "format", evaln.format);
      overlay.apply(evaln_jobs, "jobs", evaln.jobs);
      if (!evaln.rc && overlay.values.contains("rc")) {
        evaln.rc = overlay.values["rc"].get<double>();
      }
      if (!evaln.out && overlay.values.contains("out")) {
        evaln.out = overlay.values["out"].get<std::string>();
      }
      evaln.params = params_from_config(overlay.values);
      return cmd_eval_nav(evaln);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
