// Copyright 2026 The NavForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "navforge/checkpoint.h"
#include "navforge/config.h"
#include "navforge/env.h"
#include "navforge/errors.h"
#include "navforge/metrics.h"
#include "navforge/ppo.h"
#include "svg.h"

#ifndef NAVFORGE_VERSION
#define NAVFORGE_VERSION "0.0.0"
#endif
#ifndef NAVFORGE_GIT_REV
#define NAVFORGE_GIT_REV "unknown"
#endif

namespace navforge::cli {
namespace {

namespace fs = std::filesystem;

// Trajectory dump columns around the per-robot action block a0..a{k-1}.
constexpr const char* kTrajectoryLead[] = {"env", "episode", "t",  "x",    "y",
                                           "yaw", "vx",      "vy", "omega"};
constexpr const char* kTrajectoryTail[] = {"reward", "events", "goal_x", "goal_y"};
constexpr size_t kTrajectoryFixed = std::size(kTrajectoryLead) + std::size(kTrajectoryTail);

std::string trajectory_header(int action_dim) {
  std::string h;
  for (const char* c : kTrajectoryLead) h += std::string(h.empty() ? "" : ",") + c;
  for (int k = 0; k < action_dim; ++k) h += ",a" + std::to_string(k);
  for (const char* c : kTrajectoryTail) h += std::string(",") + c;
  return h;
}

std::string now_iso() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string registry_listing() {
  return "available robots: " + join(robot_names(), ", ") +
         "\navailable tasks: " + join(task_names(), ", ") + "\n";
}

// NAVFORGE_SEED, if set; throws ConfigError when it is not an integer.
std::optional<uint64_t> seed_from_env() {
  const char* s = std::getenv("NAVFORGE_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || *end != '\0' || s[0] == '-') {
    throw ConfigError(std::string("NAVFORGE_SEED is not a seed: '") + s + "'");
  }
  return v;
}

// Flag, then NAVFORGE_SEED, then whatever the configuration already holds.
uint64_t resolve_seed(const std::optional<uint64_t>& flag, uint64_t configured) {
  if (flag) return *flag;
  if (auto env = seed_from_env()) return *env;
  return configured;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
}

// CSV cell; NaN and absent values stay empty.
std::string cell(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}
std::string cell(const std::optional<double>& v) { return v ? cell(*v) : ""; }
std::string cell(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "";
}

class Manifest {
 public:
  Manifest(const std::string& command, const std::vector<std::string>& argv,
           const fs::path& out_dir) : path_(out_dir / "manifest.json") {
    j_["command"] = command;
    j_["argv"] = argv;
    j_["output_dir"] = out_dir.string();
    j_["version"] = NAVFORGE_VERSION;
    j_["git_revision"] = NAVFORGE_GIT_REV;
    j_["started_at"] = now_iso();
    j_["finished_at"] = nullptr;
    j_["status"] = "running";
  }
  Json& operator[](const char* key) { return j_[key]; }
  void write() const { write_json_file(path_.string(), j_); }
  void finish(const std::string& status, int code) {
    j_["finished_at"] = now_iso();
    j_["status"] = status;
    j_["exit_code"] = code;
    write();
  }

 private:
  fs::path path_;
  Json j_;
};

// --- train ----------------------------------------------------------------

struct TrainOptions {
  std::string robot, task;
  std::vector<std::string> configs;
  std::optional<uint64_t> seed;
  std::optional<int> epochs, num_envs, workers;
  std::string out = "runs/train";
  int checkpoint_every = 0;
  int log_every = 10;
};

TrainConfig layered_train_config(const TrainOptions& o) {
  TrainConfig cfg;
  for (const auto& path : o.configs) merge_json(load_json_file(path), cfg);
  if (!o.robot.empty()) cfg.env.robot = o.robot;
  if (!o.task.empty()) cfg.env.task = o.task;
  cfg.env.seed = resolve_seed(o.seed, cfg.env.seed);
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.num_envs) cfg.env.num_envs = *o.num_envs;
  if (o.workers) cfg.env.workers = *o.workers;
  if (cfg.epochs < 0) throw ConfigError("epochs must be >= 0");
  return cfg;
}

void plot_learning_curve(const std::vector<EpochLog>& logs, const fs::path& out) {
  std::vector<double> ep, rew, succ_ep, succ;
  for (const auto& l : logs) {
    if (std::isfinite(l.mean_reward)) {
      ep.push_back(l.epoch);
      rew.push_back(l.mean_reward);
    }
    if (std::isfinite(l.success_rate)) {
      succ_ep.push_back(l.epoch);
      succ.push_back(l.success_rate);
    }
  }
  SvgPlot r("Learning curve", "epoch", "mean episode reward");
  r.add_line(ep, rew, palette(0));
  r.write((out / "learning_curve.svg").string());
  SvgPlot s("Training success rate", "epoch", "success rate");
  s.add_line(succ_ep, succ, palette(2));
  s.write((out / "success_curve.svg").string());
}

int cmd_train(const TrainOptions& o, const std::vector<std::string>& argv,
              std::ostream& out, std::ostream& err) {
  const TrainConfig cfg = layered_train_config(o);
  const fs::path dir(o.out);
  make_dir(dir);
  Manifest manifest("train", argv, dir);
  manifest["config_paths"] = o.configs;
  manifest["seed"] = cfg.env.seed;
  manifest["robot"] = cfg.env.robot;
  manifest["task"] = cfg.env.task;
  manifest.write();
  write_json_file((dir / "config.json").string(), to_json(cfg));

  PpoTrainer trainer(cfg);
  std::ofstream curve(dir / "learning_curve.csv");
  if (!curve) throw ConfigError("cannot write " + (dir / "learning_curve.csv").string());
  curve << "epoch,mean_reward,std_reward,kl,lr,wall_clock,policy_loss,"
           "value_loss,episodes,success_rate,mean_goals_reached\n";
  const auto ckpt_state = [&] {
    return Json{{"epoch", trainer.epoch()},
                {"lr", trainer.lr()},
                {"seed", cfg.env.seed}};
  };
  const std::string ckpt = (dir / "checkpoint.ckpt").string();
  std::vector<EpochLog> logs;
  try {
    trainer.train([&](const EpochLog& l) {
      logs.push_back(l);
      curve << l.epoch << ',' << cell(l.mean_reward) << ',' << cell(l.std_reward)
            << ',' << cell(l.kl) << ',' << cell(l.lr) << ','
            << cell(l.wall_clock) << ',' << cell(l.policy_loss) << ','
            << cell(l.value_loss) << ',' << l.episodes << ','
            << cell(l.success_rate) << ',' << cell(l.mean_goals_reached) << '\n';
      curve.flush();
      if (o.log_every > 0 && (l.epoch % o.log_every == 0 || l.epoch + 1 == cfg.epochs)) {
        out << "epoch " << l.epoch << "  reward " << cell(l.mean_reward)
            << "  success " << cell(l.success_rate) << "  kl " << cell(l.kl)
            << "  lr " << cell(l.lr) << '\n';
      }
      if (o.checkpoint_every > 0 && (l.epoch + 1) % o.checkpoint_every == 0) {
        save_checkpoint(ckpt, trainer.agent(), to_json(cfg), ckpt_state());
      }
    });
  } catch (const std::exception& e) {
    const bool sim = dynamic_cast<const SimulationFault*>(&e) != nullptr;
    if (!sim && dynamic_cast<const TrainingFault*>(&e) == nullptr) throw;
    const std::string dump = (dir / "fault_checkpoint.ckpt").string();
    Json fault{{"kind", sim ? "simulation" : "training"},
               {"message", e.what()},
               {"epoch", trainer.epoch()},
               {"checkpoint", dump}};
    if (sim) fault["env_index"] = static_cast<const SimulationFault&>(e).env_index();
    save_checkpoint(dump, trainer.agent(), to_json(cfg), ckpt_state());
    write_json_file((dir / "fault.json").string(), fault);
    err << "error: " << (sim ? "simulation" : "training") << " fault: " << e.what()
        << "\nstate dumped to " << dump << '\n';
    manifest["fault"] = fault;
    manifest.finish("fault", kExitRuntimeFault);
    return kExitRuntimeFault;
  }
  save_checkpoint(ckpt, trainer.agent(), to_json(cfg), ckpt_state());
  plot_learning_curve(logs, dir);
  out << "checkpoint written to " << ckpt << '\n';
  manifest["checkpoint"] = ckpt;
  manifest.finish("ok", kExitOk);
  return kExitOk;
}

// --- eval -----------------------------------------------------------------

struct EvalOptions {
  std::string checkpoint;
  std::string robot, task;
  std::optional<int> num_envs, workers;
  int episodes = 4096;
  std::optional<uint64_t> seed;
  std::string out = "runs/eval";
  bool plots = false;
  int trace_episodes = 16;
  int trajectories = 0;
};

struct PathInfo {
  int env = 0;
  std::vector<Vec2> goals;
  std::vector<Obstacle> obstacles;
};

Json summary_json(const SummaryTable& t, const EnvConfig& env, int episodes,
                  const std::string& checkpoint) {
  Json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["robot"] = t.robot;
  j["task"] = to_string(t.task);
  j["episodes"] = episodes;
  j["num_envs"] = env.num_envs;
  j["seed"] = env.seed;
  j["checkpoint"] = checkpoint;
  Json m = Json::object();
  for (const auto& [metric, s] : t.stats) {
    m[metric_key(metric)] = {{"mean", s.mean}, {"std", s.std}, {"count", s.count}};
  }
  j["metrics"] = m;
  return j;
}

void write_episode_csv(const std::vector<EpisodeMetrics>& eps, const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << "env,episode,steps,total_reward,success,final_dist_err,heading_err_deg,"
       "time_to_target,lin_vel_err,ang_vel_err,ctrl_variation,goals_reached,"
       "goals_total\n";
  for (const auto& e : eps) {
    f << e.env << ',' << e.episode << ',' << e.steps << ',' << cell(e.total_reward)
      << ',' << (e.success ? 1 : 0) << ',' << cell(e.final_dist_err) << ','
      << cell(e.heading_err_deg) << ',' << cell(e.time_to_target) << ','
      << cell(e.lin_vel_err) << ',' << cell(e.ang_vel_err) << ','
      << cell(e.ctrl_variation) << ',' << cell(e.goals_reached) << ','
      << cell(e.goals_total) << '\n';
  }
}

void plot_eval(const std::vector<EpisodeMetrics>& eps, TaskKind task,
               double control_dt, const fs::path& dir) {
  SvgPlot d("Distance to goal", "time [s]", "distance [m]");
  size_t k = 0;
  for (const auto& e : eps) {
    if (e.distance_trace.empty()) continue;
    std::vector<double> t(e.distance_trace.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = (i + 1) * control_dt;
    d.add_line(t, e.distance_trace, palette(k++));
  }
  d.write((dir / "distance_over_time.svg").string());
  if (task != TaskKind::kGoThroughPositions) return;
  std::map<int, int> hist;
  for (const auto& e : eps) ++hist[e.goals_reached.value_or(0)];
  SvgPlot h("Goals reached per episode", "goals reached", "episodes");
  for (const auto& [g, n] : hist) h.add_bar(g - 0.4, 0.8, n, palette(0));
  h.write((dir / "goals_histogram.svg").string());
}

int cmd_eval(const EvalOptions& o, const std::vector<std::string>& argv,
             std::ostream& out) {
  if (o.episodes < 1) throw ConfigError("episodes must be >= 1");
  const Checkpoint ck = load_checkpoint(o.checkpoint);
  TrainConfig cfg;
  if (ck.config.is_object()) merge_json(ck.config, cfg);
  EnvConfig env_cfg = cfg.env;
  if (!o.robot.empty()) env_cfg.robot = o.robot;
  if (!o.task.empty()) env_cfg.task = o.task;
  env_cfg.seed = resolve_seed(o.seed, env_cfg.seed);
  env_cfg.num_envs = o.num_envs.value_or(std::min(o.episodes, 4096));
  if (o.workers) env_cfg.workers = *o.workers;
  MetricsConfig mcfg = cfg.metrics;
  mcfg.trace_episodes = o.plots ? o.trace_episodes : 0;

  const fs::path dir(o.out);
  make_dir(dir);
  Manifest manifest("eval", argv, dir);
  manifest["checkpoint"] = o.checkpoint;
  manifest["seed"] = env_cfg.seed;
  manifest.write();

  EnvBatch env(env_cfg);
  check_agent_matches(ck.agent, env);

  std::ofstream traj;
  std::vector<PathInfo> paths;
  if (o.trajectories > 0) {
    traj.open(dir / "trajectories.csv");
    if (!traj) throw ConfigError("cannot write trajectories.csv");
    traj << trajectory_header(env.action_dim()) << '\n' << std::setprecision(10);
  }
  const int n_traj = std::min(o.trajectories, env.num_envs());
  std::vector<uint8_t> have_goals(n_traj, 0);
  const auto record = [&](const StepResult& r) {
    for (int i = 0; i < n_traj; ++i) {
      const EnvStepInfo& s = r.info[i];
      if (s.episode != 0) continue;
      traj << i << ',' << s.episode << ',' << s.t << ',' << s.state.pose.x << ','
           << s.state.pose.y << ',' << s.state.pose.yaw << ',' << s.state.twist.vx
           << ',' << s.state.twist.vy << ',' << s.state.twist.omega;
      for (int k = 0; k < s.action.dim(); ++k) traj << ',' << s.action[k];
      traj << ',' << r.reward[i] << ',' << events_to_string(s.events) << ','
           << s.goal.x << ',' << s.goal.y << '\n';
      if (!have_goals[i] && !r.done(i)) {
        PathInfo p;
        p.env = i;
        for (const auto& g : env.task_state(i).goals) p.goals.push_back(g.position());
        p.obstacles = env.task_state(i).obstacles;
        paths.push_back(std::move(p));
        have_goals[i] = 1;
      }
    }
  };
  const std::vector<EpisodeMetrics> eps =
      evaluate_policy(env, ck.agent, o.episodes, mcfg,
                      n_traj > 0 ? std::function<void(const StepResult&)>(record)
                                 : nullptr);
  const SummaryTable table = aggregate(eps, env_cfg.robot);
  write_episode_csv(eps, dir / "episodes.csv");
  write_json_file((dir / "summary.json").string(),
                  summary_json(table, env_cfg, static_cast<int>(eps.size()),
                               o.checkpoint));
  const std::string text = render_table({table});
  {
    std::ofstream f(dir / "table.txt");
    f << text;
  }
  if (o.plots) plot_eval(eps, env.task().kind(), env_cfg.control_dt(), dir);
  if (n_traj > 0) {
    const auto& th = env.task().config().thresholds;
    Json side;
    side["schema_version"] = kSummarySchemaVersion;
    side["config"] = to_json(env_cfg);
    side["robot"] = env_cfg.robot;
    side["task"] = env_cfg.task;
    side["arena_radius"] = env.task().config().arena.radius;
    side["goal_radius"] = env.task().kind() == TaskKind::kGoThroughPositions
                              ? th.eps_tp
                              : th.eps_p;
    Json pj = Json::array();
    std::sort(paths.begin(), paths.end(),
              [](const PathInfo& a, const PathInfo& b) { return a.env < b.env; });
    for (const auto& p : paths) {
      Json g = Json::array(), ob = Json::array();
      for (const auto& v : p.goals) g.push_back({v.x, v.y});
      for (const auto& v : p.obstacles) ob.push_back({v.center.x, v.center.y, v.radius});
      pj.push_back({{"env", p.env}, {"episode", 0}, {"goals", g}, {"obstacles", ob}});
    }
    side["paths"] = pj;
    traj.close();
    write_json_file((dir / "trajectories.csv.json").string(), side);
  }
  out << text;
  manifest["episodes"] = eps.size();
  manifest.finish("ok", kExitOk);
  return kExitOk;
}

// --- replay ---------------------------------------------------------------

struct TrajectoryPoint {
  int env;
  long episode;
  int t;
  double x, y, yaw, gx, gy;
};

double parse_number(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw FormatError(where + ": '" + s + "' is not a finite number");
  }
  return v;
}

// Number of action columns named by a trajectory header; throws FormatError
// when the header does not have the dump layout.
int trajectory_action_dim(const std::string& header, const std::string& path) {
  std::vector<std::string> cols;
  std::stringstream ss(header);
  std::string tok;
  while (std::getline(ss, tok, ',')) cols.push_back(tok);
  const int k = static_cast<int>(cols.size()) - static_cast<int>(kTrajectoryFixed);
  if (k < 0 || header != trajectory_header(k)) {
    throw FormatError(path + ":1: expected header '" + trajectory_header(2) +
                      "' with one a<k> column per action");
  }
  return k;
}

std::vector<TrajectoryPoint> read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open trajectory " + path);
  std::vector<TrajectoryPoint> pts;
  std::string line;
  int lineno = 0;
  size_t fields = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      fields = kTrajectoryFixed + trajectory_action_dim(line, path);
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    const std::string where = path + ":" + std::to_string(lineno);
    if (f.size() != fields) {
      throw FormatError(where + ": expected " + std::to_string(fields) +
                        " fields, found " + std::to_string(f.size()));
    }
    TrajectoryPoint p{};
    const double env = parse_number(f[0], where);
    const double ep = parse_number(f[1], where);
    const double t = parse_number(f[2], where);
    if (env < 0 || ep < 0 || t < 0 || env != std::floor(env) ||
        ep != std::floor(ep) || t != std::floor(t)) {
      throw FormatError(where + ": env, episode and t must be non-negative integers");
    }
    p.env = static_cast<int>(env);
    p.episode = static_cast<long>(ep);
    p.t = static_cast<int>(t);
    p.x = parse_number(f[3], where);
    p.y = parse_number(f[4], where);
    p.yaw = parse_number(f[5], where);
    // Twist, actions and reward are validated but not plotted.
    for (size_t c = 6; c + 3 < fields; ++c) parse_number(f[c], where);
    try {
      events_from_string(f[fields - 3]);
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
    p.gx = parse_number(f[fields - 2], where);
    p.gy = parse_number(f[fields - 1], where);
    pts.push_back(p);
  }
  return pts;
}

struct ReplayOptions {
  std::vector<std::string> trajectories;
  std::string out = "trajectories.svg";
};

int cmd_replay(const ReplayOptions& o, std::ostream& out) {
  SvgPlot plot("Trajectories", "x [m]", "y [m]");
  plot.set_equal_aspect(true);
  size_t color = 0;
  double arena = 0.0;
  for (size_t run = 0; run < o.trajectories.size(); ++run) {
    const std::string& path = o.trajectories[run];
    const std::vector<TrajectoryPoint> pts = read_trajectory(path);
    Json side;
    if (fs::exists(path + ".json")) {
      try {
        side = load_json_file(path + ".json");
        arena = std::max(arena, side.value("arena_radius", 0.0));
      } catch (const std::exception& e) {
        throw FormatError(path + ".json: " + e.what());
      }
    }
    const double goal_r = side.is_object() ? side.value("goal_radius", 0.1) : 0.1;
    // One path per (env, episode), in order of first appearance.
    std::map<std::pair<int, long>, size_t> index;
    std::vector<std::vector<const TrajectoryPoint*>> groups;
    for (const auto& p : pts) {
      auto [it, fresh] = index.try_emplace({p.env, p.episode}, groups.size());
      if (fresh) groups.emplace_back();
      groups[it->second].push_back(&p);
    }
    for (const auto& g : groups) {
      const std::string& c = palette(color++);
      std::vector<double> xs, ys;
      std::vector<std::pair<double, double>> goals;
      for (const auto* p : g) {
        xs.push_back(p->x);
        ys.push_back(p->y);
        if (goals.empty() || goals.back() != std::make_pair(p->gx, p->gy)) {
          goals.emplace_back(p->gx, p->gy);
        }
      }
      plot.add_line(xs, ys, c);
      // Full goal lists from the sidecar replace the visited ones.
      if (side.is_object() && side.contains("paths")) {
        for (const auto& sp : side["paths"]) {
          if (sp.value("env", -1) != g.front()->env ||
              sp.value("episode", -1L) != g.front()->episode) {
            continue;
          }
          goals.clear();
          for (const auto& v : sp.at("goals")) goals.emplace_back(v[0], v[1]);
          for (const auto& v : sp.value("obstacles", Json::array())) {
            plot.add_circle(v[0], v[1], v[2], "#555", "#bbb");
          }
        }
      }
      for (const auto& [gx, gy] : goals) plot.add_circle(gx, gy, goal_r, c);
    }
  }
  if (arena > 0.0 && arena < 50.0) plot.add_circle(0, 0, arena, "#444", "none", true);
  plot.write(o.out);
  out << "plot written to " << o.out << '\n';
  return kExitOk;
}

// --- report ---------------------------------------------------------------

struct ReportOptions {
  std::vector<std::string> eval_dirs;
  std::string out = "runs/report";
};

SummaryTable table_from_summary(const Json& j, const std::string& where) {
  SummaryTable t;
  try {
    t.task = parse_task_kind(j.at("task").get<std::string>());
    t.robot = j.at("robot").get<std::string>();
    t.episodes = j.at("episodes").get<int>();
    for (Metric m : kAllMetrics) {
      const Json& ms = j.at("metrics");
      if (!ms.contains(metric_key(m))) continue;
      const Json& s = ms.at(metric_key(m));
      t.stats.emplace_back(m, MetricStat{s.at("mean").get<double>(),
                                         s.at("std").get<double>(),
                                         s.at("count").get<int>()});
    }
  } catch (const RegistryError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(where + ": " + e.what());
  }
  return t;
}

int cmd_report(const ReportOptions& o, const std::vector<std::string>& argv,
               std::ostream& out) {
  std::vector<SummaryTable> rows;
  std::optional<int> schema;
  for (const auto& d : o.eval_dirs) {
    const fs::path p = fs::is_directory(d) ? fs::path(d) / "summary.json" : fs::path(d);
    const Json j = load_json_file(p.string());
    const int v = j.value("schema_version", -1);
    if (schema && *schema != v) {
      throw FormatError("mixed summary schema versions: " + std::to_string(*schema) +
                        " and " + std::to_string(v) + " (" + p.string() + ")");
    }
    if (v != kSummarySchemaVersion) {
      throw FormatError(p.string() + ": unsupported summary schema version " +
                        std::to_string(v));
    }
    schema = v;
    rows.push_back(table_from_summary(j, p.string()));
  }
  const fs::path dir(o.out);
  make_dir(dir);
  Manifest manifest("report", argv, dir);
  manifest["inputs"] = o.eval_dirs;
  manifest.write();
  const std::string text = render_table(rows);
  {
    std::ofstream f(dir / "report.txt");
    if (!f) throw ConfigError("cannot write report.txt");
    f << text;
  }
  Json rj;
  rj["schema_version"] = kSummarySchemaVersion;
  Json rs = Json::array();
  for (const auto& r : rows) {
    Json cells = Json::object();
    for (Metric m : kAllMetrics) cells[metric_key(m)] = format_cell(r, m);
    rs.push_back({{"robot", r.robot},
                  {"task", to_string(r.task)},
                  {"episodes", r.episodes},
                  {"cells", cells}});
  }
  rj["rows"] = rs;
  write_json_file((dir / "report.json").string(), rj);
  out << text;
  manifest.finish("ok", kExitOk);
  return kExitOk;
}

// --- defaults -------------------------------------------------------------

int cmd_defaults(const std::string& out_dir, std::ostream& out) {
  const fs::path dir(out_dir);
  make_dir(dir / "robots");
  make_dir(dir / "tasks");
  make_dir(dir / "train");
  for (const auto& name : robot_names()) {
    write_json_file((dir / "robots" / (name + ".json")).string(),
                    to_json(default_robot_spec(name)));
  }
  write_json_file((dir / "tasks" / "reward_coefficients.json").string(),
                  to_json(RewardCoefficients{}));
  write_json_file((dir / "tasks" / "success_thresholds.json").string(),
                  to_json(SuccessThresholds{}));
  write_json_file((dir / "train" / "default.json").string(), to_json(TrainConfig{}));
  out << "defaults written to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Planar robot navigation: train, evaluate and report PPO policies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(NAVFORGE_VERSION) + " (" +
                                        NAVFORGE_GIT_REV + ")");

  TrainOptions to;
  auto* train = app.add_subcommand("train", "Train one policy for a robot-task pair");
  train->add_option("--robot", to.robot, "Robot name");
  train->add_option("--task", to.task, "Task name");
  train->add_option("--config", to.configs,
                    "JSON config overlay; repeat to layer several")
      ->check(CLI::ExistingFile);
  train->add_option("--seed", to.seed, "Global seed (default: NAVFORGE_SEED)");
  train->add_option("--epochs", to.epochs, "Training epochs");
  train->add_option("--num-envs", to.num_envs, "Parallel environments");
  train->add_option("--workers", to.workers, "Worker threads (0 = all cores)");
  train->add_option("--out", to.out, "Output directory")->capture_default_str();
  train->add_option("--checkpoint-every", to.checkpoint_every,
                    "Also checkpoint every N epochs");
  train->add_option("--log-every", to.log_every, "Progress line every N epochs");

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint deterministically");
  eval->add_option("--checkpoint", eo.checkpoint, "Checkpoint file")->required();
  eval->add_option("--robot", eo.robot, "Override the checkpoint's robot");
  eval->add_option("--task", eo.task, "Override the checkpoint's task");
  eval->add_option("--num-envs", eo.num_envs, "Parallel environments");
  eval->add_option("--episodes", eo.episodes, "Evaluation episodes")
      ->capture_default_str();
  eval->add_option("--seed", eo.seed, "Global seed (default: NAVFORGE_SEED)");
  eval->add_option("--workers", eo.workers, "Worker threads (0 = all cores)");
  eval->add_option("--out", eo.out, "Output directory")->capture_default_str();
  eval->add_flag("--plots", eo.plots, "Write SVG plots");
  eval->add_option("--trace-episodes", eo.trace_episodes,
                   "Episodes in the distance plot");
  eval->add_option("--trajectories", eo.trajectories,
                   "Record the first episode of the first N envs");

  ReplayOptions ro;
  auto* replay = app.add_subcommand("replay", "Plot recorded trajectories as SVG");
  replay->add_option("--trajectory", ro.trajectories,
                     "Trajectory CSV; repeat to overlay runs")
      ->required();
  replay->add_option("--out", ro.out, "Output SVG")->capture_default_str();

  ReportOptions po;
  auto* report = app.add_subcommand("report", "Compare evaluation summaries");
  report->add_option("--eval-dirs", po.eval_dirs,
                     "Eval output directories or summary.json files")
      ->required();
  report->add_option("--out", po.out, "Output directory")->capture_default_str();

  std::string defaults_out = "configs";
  auto* defaults = app.add_subcommand("defaults", "Write the built-in configuration");
  defaults->add_option("--out", defaults_out, "Output directory")
      ->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  try {
    if (*train) return cmd_train(to, args, out, err);
    if (*eval) return cmd_eval(eo, args, out);
    if (*replay) return cmd_replay(ro, out);
    if (*report) return cmd_report(po, args, out);
    if (*defaults) return cmd_defaults(defaults_out, out);
  } catch (const RegistryError& e) {
    err << "error: " << e.what() << '\n' << registry_listing();
    return kExitUserError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "fatal: " << e.what() << '\n';
    return kExitRuntimeFault;
  }
  return kExitUserError;
}

}  // namespace navforge::cli
