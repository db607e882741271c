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

#ifndef NAVFORGE_METRICS_H_
#define NAVFORGE_METRICS_H_

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "navforge/env.h"
#include "navforge/tasks.h"

namespace navforge {

struct MetricsConfig {
  // Position tasks also succeed once the threshold predicate has held for
  // this many consecutive steps.
  int hold_window = 10;
  // time_to_target in seconds (true) or control steps (false).
  bool time_in_seconds = true;
  // GoThroughPositions success: at least this many waypoints reached.
  int min_goals_for_success = 1;
  // Keep per-step goal distances of the first N episodes for plotting.
  int trace_episodes = 0;

  void validate() const;
};

enum class Metric {
  kSuccess,
  kDistErr,
  kHeadingErr,
  kTimeToTarget,
  kLinVelErr,
  kAngVelErr,
  kCtrlVar,
  kGoalsReached,
};

inline constexpr std::array<Metric, 8> kAllMetrics = {
    Metric::kSuccess,   Metric::kDistErr,   Metric::kHeadingErr,
    Metric::kTimeToTarget, Metric::kLinVelErr, Metric::kAngVelErr,
    Metric::kCtrlVar,   Metric::kGoalsReached};

// Machine name ("success_rate", "final_dist_err", ...).
std::string metric_key(Metric m);
// Column header ("Success Rate", "Dist Err", ...).
std::string metric_label(Metric m);
bool metric_applicable(TaskKind task, Metric m);

struct EpisodeMetrics {
  int env = 0;
  uint64_t episode = 0;
  TaskKind task = TaskKind::kGoToPosition;
  int steps = 0;
  double total_reward = 0.0;
  bool success = false;
  std::optional<double> final_dist_err;   // m
  std::optional<double> heading_err_deg;  // deg
  std::optional<double> time_to_target;   // s or steps
  std::optional<double> lin_vel_err;      // m/s
  std::optional<double> ang_vel_err;      // rad/s
  double ctrl_variation = 0.0;
  std::optional<int> goals_reached;
  std::optional<int> goals_total;
  std::vector<double> distance_trace;     // optional, for plots

  // Value of a metric for aggregation; success maps to 0/1.
  std::optional<double> value(Metric m) const;
};

// Running per-episode state of one env.
struct EpisodeAccumulator {
  int steps = 0;
  double total_reward = 0.0;
  int hold_count = 0;
  bool held = false;
  std::optional<int> first_success_step;
  std::array<double, kMaxActionDim> action_mean{};
  std::array<double, kMaxActionDim> action_m2{};
  int action_dim = 0;
  double sum_lin_err = 0.0;
  double sum_ang_err = 0.0;
  TaskSnapshot last;
  std::vector<double> distance_trace;

  // Folds in one control step.
  void add(const EnvStepInfo& info, double reward, int hold_window,
           bool trace);
};

// Computes the episode metrics from a finished accumulator.
EpisodeMetrics finalize_episode(const EpisodeAccumulator& acc, TaskKind task,
                                double control_dt, const MetricsConfig& cfg);

// Collects episode metrics from step results. Observes one EnvBatch at a
// time; detaching keeps the episodes finished so far.
class MetricsRecorder : public StepObserver {
 public:
  MetricsRecorder(TaskKind task, int num_envs, double control_dt,
                  MetricsConfig cfg = {});
  ~MetricsRecorder() override;

  // Throws ContractError when this recorder or the batch is already attached.
  void attach(EnvBatch& batch);
  void detach();
  bool attached() const { return batch_ != nullptr; }

  void on_step(const EnvBatch& batch, const StepResult& result) override;
  // Feeds one env's step; exposed for tests and replay.
  void record(int env, const EnvStepInfo& info, double reward, bool done);

  // Finishes env's running episode now (e.g. at the end of an evaluation).
  EpisodeMetrics finalize(int env) const;

  const std::vector<EpisodeMetrics>& episodes() const { return episodes_; }
  std::vector<EpisodeMetrics> take_episodes();
  size_t count() const { return episodes_.size(); }
  // Episodes finished by each env so far.
  const std::vector<int>& finished_per_env() const { return finished_; }

 private:
  TaskKind task_;
  double control_dt_;
  MetricsConfig cfg_;
  std::vector<EpisodeAccumulator> acc_;
  std::vector<int> finished_;
  std::vector<EpisodeMetrics> episodes_;
  EnvBatch* batch_ = nullptr;
};

// Creates a recorder matching the batch and attaches it.
std::unique_ptr<MetricsRecorder> attach_hooks(EnvBatch& batch,
                                              MetricsConfig cfg = {});

struct MetricStat {
  double mean = 0.0;
  double std = 0.0;  // population std
  int count = 0;     // records where the metric was defined
};

struct SummaryTable {
  TaskKind task = TaskKind::kGoToPosition;
  std::string robot;
  int episodes = 0;
  // Only applicable metrics with at least one defined value are present.
  std::vector<std::pair<Metric, MetricStat>> stats;

  const MetricStat* find(Metric m) const;
};

// Throws ContractError on empty input or mixed tasks.
SummaryTable aggregate(const std::vector<EpisodeMetrics>& records,
                       const std::string& robot = "");

// "0.94 ± 0.04" style cell, "---" when absent. Heading in degrees, angular
// velocity error in deg/s.
std::string format_cell(const SummaryTable& t, Metric m, int precision = 2);

// Plain-text results table with one row per summary and one column per metric.
std::string render_table(const std::vector<SummaryTable>& rows);

}  // namespace navforge

#endif  // NAVFORGE_METRICS_H_
