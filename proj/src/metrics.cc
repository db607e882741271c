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

#include "navforge/metrics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "navforge/errors.h"

namespace navforge {
namespace {

constexpr double kRadToDeg = 180.0 / kPi;

bool is_position_task(TaskKind t) {
  return t == TaskKind::kGoToPosition || t == TaskKind::kGoToPose ||
         t == TaskKind::kGoToPositionObstacles;
}

}  // namespace

void MetricsConfig::validate() const {
  if (hold_window < 1) throw ConfigError("hold_window must be >= 1");
  if (min_goals_for_success < 1) {
    throw ConfigError("min_goals_for_success must be >= 1");
  }
  if (trace_episodes < 0) throw ConfigError("trace_episodes must be >= 0");
}

std::string metric_key(Metric m) {
  switch (m) {
    case Metric::kSuccess: return "success_rate";
    case Metric::kDistErr: return "final_dist_err";
    case Metric::kHeadingErr: return "heading_err";
    case Metric::kTimeToTarget: return "time_to_target";
    case Metric::kLinVelErr: return "lin_vel_err";
    case Metric::kAngVelErr: return "ang_vel_err";
    case Metric::kCtrlVar: return "ctrl_variation";
    case Metric::kGoalsReached: return "goals_reached";
  }
  return "?";
}

std::string metric_label(Metric m) {
  switch (m) {
    case Metric::kSuccess: return "Success Rate";
    case Metric::kDistErr: return "Dist Err";
    case Metric::kHeadingErr: return "Heading Err";
    case Metric::kTimeToTarget: return "Time to Target";
    case Metric::kLinVelErr: return "Lin Vel Err";
    case Metric::kAngVelErr: return "Ang Vel Err";
    case Metric::kCtrlVar: return "Ctrl Var";
    case Metric::kGoalsReached: return "Goals Reached";
  }
  return "?";
}

bool metric_applicable(TaskKind task, Metric m) {
  switch (m) {
    case Metric::kSuccess:
    case Metric::kCtrlVar:
      return true;
    case Metric::kDistErr:
    case Metric::kTimeToTarget:
      return task != TaskKind::kTrackVelocities;
    case Metric::kHeadingErr:
      return task == TaskKind::kGoToPose;
    case Metric::kLinVelErr:
    case Metric::kAngVelErr:
      return task == TaskKind::kTrackVelocities;
    case Metric::kGoalsReached:
      return task == TaskKind::kGoThroughPositions;
  }
  return false;
}

std::optional<double> EpisodeMetrics::value(Metric m) const {
  switch (m) {
    case Metric::kSuccess: return success ? 1.0 : 0.0;
    case Metric::kDistErr: return final_dist_err;
    case Metric::kHeadingErr: return heading_err_deg;
    case Metric::kTimeToTarget: return time_to_target;
    case Metric::kLinVelErr: return lin_vel_err;
    case Metric::kAngVelErr: return ang_vel_err;
    case Metric::kCtrlVar: return ctrl_variation;
    case Metric::kGoalsReached:
      if (goals_reached) return double(*goals_reached);
      return std::nullopt;
  }
  return std::nullopt;
}

void EpisodeAccumulator::add(const EnvStepInfo& info, double reward,
                             int hold_window, bool trace) {
  const int t = steps;
  ++steps;
  total_reward += reward;
  last = info.snapshot;
  if (info.snapshot.success_condition) {
    if (++hold_count >= hold_window) held = true;
    if (!first_success_step) first_success_step = t;
  } else {
    hold_count = 0;
  }
  action_dim = info.action.dim();
  // Welford update keeps a constant sequence at exactly zero spread.
  for (int k = 0; k < action_dim; ++k) {
    const double x = info.action[k];
    const double delta = x - action_mean[k];
    action_mean[k] += delta / steps;
    action_m2[k] += delta * (x - action_mean[k]);
  }
  sum_lin_err += info.snapshot.lin_vel_error;
  sum_ang_err += info.snapshot.ang_vel_error;
  if (trace) distance_trace.push_back(info.snapshot.distance);
}

EpisodeMetrics finalize_episode(const EpisodeAccumulator& acc, TaskKind task,
                                double control_dt, const MetricsConfig& cfg) {
  EpisodeMetrics m;
  m.task = task;
  m.steps = acc.steps;
  m.total_reward = acc.total_reward;
  m.distance_trace = acc.distance_trace;
  if (acc.steps > 0 && acc.action_dim > 0) {
    double sum = 0.0;
    for (int k = 0; k < acc.action_dim; ++k) {
      sum += std::sqrt(std::max(0.0, acc.action_m2[k] / acc.steps));
    }
    m.ctrl_variation = sum / acc.action_dim;
  }
  const auto time_of = [&](int step) {
    const double n = step + 1;
    return cfg.time_in_seconds ? n * control_dt : n;
  };
  if (is_position_task(task)) {
    m.final_dist_err = acc.last.distance;
    m.success = acc.last.success_condition || acc.held;
    if (acc.first_success_step) m.time_to_target = time_of(*acc.first_success_step);
    if (task == TaskKind::kGoToPose) {
      m.heading_err_deg = acc.last.heading_error * kRadToDeg;
    }
  } else if (task == TaskKind::kGoThroughPositions) {
    m.final_dist_err = acc.last.distance;
    m.goals_reached = acc.last.goals_reached;
    m.goals_total = acc.last.goals_total;
    m.success = acc.last.goals_reached >= cfg.min_goals_for_success;
    if (acc.first_success_step) m.time_to_target = time_of(*acc.first_success_step);
  } else {
    if (acc.steps > 0) {
      m.lin_vel_err = acc.sum_lin_err / acc.steps;
      m.ang_vel_err = acc.sum_ang_err / acc.steps;
    }
    m.success = acc.last.success_condition;
  }
  return m;
}

MetricsRecorder::MetricsRecorder(TaskKind task, int num_envs,
                                 double control_dt, MetricsConfig cfg)
    : task_(task),
      control_dt_(control_dt),
      cfg_(cfg),
      acc_(num_envs),
      finished_(num_envs, 0) {
  cfg_.validate();
}

MetricsRecorder::~MetricsRecorder() { detach(); }

void MetricsRecorder::attach(EnvBatch& batch) {
  if (batch_ != nullptr) {
    throw ContractError("MetricsRecorder: already attached");
  }
  if (batch.num_envs() != static_cast<int>(acc_.size()) ||
      batch.task().kind() != task_) {
    throw ContractError("MetricsRecorder: batch does not match recorder");
  }
  batch.attach(this);
  batch_ = &batch;
}

void MetricsRecorder::detach() {
  if (batch_ != nullptr) batch_->detach(this);
  batch_ = nullptr;
}

void MetricsRecorder::on_step(const EnvBatch&, const StepResult& result) {
  for (size_t i = 0; i < result.info.size(); ++i) {
    record(static_cast<int>(i), result.info[i], result.reward[i],
           result.done(static_cast<int>(i)));
  }
}

void MetricsRecorder::record(int env, const EnvStepInfo& info, double reward,
                             bool done) {
  EpisodeAccumulator& a = acc_.at(env);
  const bool trace =
      static_cast<int>(episodes_.size()) < cfg_.trace_episodes;
  a.add(info, reward, cfg_.hold_window, trace);
  if (!done) return;
  EpisodeMetrics m = finalize_episode(a, task_, control_dt_, cfg_);
  m.env = env;
  m.episode = info.episode;
  episodes_.push_back(std::move(m));
  ++finished_[env];
  a = EpisodeAccumulator{};
}

EpisodeMetrics MetricsRecorder::finalize(int env) const {
  EpisodeMetrics m = finalize_episode(acc_.at(env), task_, control_dt_, cfg_);
  m.env = env;
  m.episode = finished_[env];
  return m;
}

std::vector<EpisodeMetrics> MetricsRecorder::take_episodes() {
  std::vector<EpisodeMetrics> out;
  out.swap(episodes_);
  return out;
}

std::unique_ptr<MetricsRecorder> attach_hooks(EnvBatch& batch,
                                              MetricsConfig cfg) {
  auto rec = std::make_unique<MetricsRecorder>(
      batch.task().kind(), batch.num_envs(), batch.config().control_dt(), cfg);
  rec->attach(batch);
  return rec;
}

const MetricStat* SummaryTable::find(Metric m) const {
  for (const auto& [k, s] : stats) {
    if (k == m) return &s;
  }
  return nullptr;
}

SummaryTable aggregate(const std::vector<EpisodeMetrics>& records,
                       const std::string& robot) {
  if (records.empty()) throw ContractError("aggregate: no records");
  SummaryTable t;
  t.task = records.front().task;
  t.robot = robot;
  t.episodes = static_cast<int>(records.size());
  for (const auto& r : records) {
    if (r.task != t.task) throw ContractError("aggregate: mixed tasks");
  }
  for (Metric m : kAllMetrics) {
    if (!metric_applicable(t.task, m)) continue;
    // Sort before summing so the result does not depend on record order.
    std::vector<double> v;
    for (const auto& r : records) {
      if (auto x = r.value(m)) v.push_back(*x);
    }
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    MetricStat s;
    s.count = static_cast<int>(v.size());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / s.count;
    double sq = 0.0;
    for (double x : v) sq += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(sq / s.count);
    t.stats.emplace_back(m, s);
  }
  return t;
}

std::string format_cell(const SummaryTable& t, Metric m, int precision) {
  const MetricStat* s = t.find(m);
  if (s == nullptr) return "---";
  const double scale = m == Metric::kAngVelErr ? kRadToDeg : 1.0;
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << s->mean * scale
      << " ± " << s->std * scale;
  return out.str();
}

std::string render_table(const std::vector<SummaryTable>& rows) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Task", "Robot"};
  for (Metric m : kAllMetrics) header.push_back(metric_label(m));
  cells.push_back(header);
  for (const auto& r : rows) {
    std::vector<std::string> line{to_string(r.task), r.robot};
    for (Metric m : kAllMetrics) line.push_back(format_cell(r, m));
    cells.push_back(std::move(line));
  }
  // Width in code points; the plus-minus sign is two bytes in UTF-8.
  const auto width = [](const std::string& s) {
    size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
  };
  std::vector<size_t> w(header.size(), 0);
  for (const auto& line : cells) {
    for (size_t c = 0; c < line.size(); ++c) w[c] = std::max(w[c], width(line[c]));
  }
  std::ostringstream out;
  for (size_t r = 0; r < cells.size(); ++r) {
    for (size_t c = 0; c < cells[r].size(); ++c) {
      out << cells[r][c] << std::string(w[c] - width(cells[r][c]), ' ');
      out << (c + 1 < cells[r].size() ? " | " : "\n");
    }
    if (r == 0) {
      for (size_t c = 0; c < w.size(); ++c) {
        out << std::string(w[c], '-') << (c + 1 < w.size() ? "-+-" : "\n");
      }
    }
  }
  return out.str();
}

}  // namespace navforge
