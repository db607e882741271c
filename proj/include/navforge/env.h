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

#ifndef NAVFORGE_ENV_H_
#define NAVFORGE_ENV_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navforge/action.h"
#include "navforge/planar.h"
#include "navforge/randomization.h"
#include "navforge/robots.h"
#include "navforge/tasks.h"

namespace navforge {

// Explicit allow/deny entry layered over the built-in compatibility matrix.
struct CompatibilityOverride {
  std::string robot;
  std::string task;
  bool allowed = true;

  friend bool operator==(const CompatibilityOverride&,
                         const CompatibilityOverride&) = default;
};

// Kingfisher x goto_pose is denied unless overridden; everything else is
// allowed. Later overrides win.
bool pair_allowed(const std::string& robot, const std::string& task,
                  std::span<const CompatibilityOverride> overrides = {});

struct EnvConfig {
  std::string robot = "turtlebot2";
  std::string task = "goto_position";
  int num_envs = 1;
  uint64_t seed = 0;
  double dt = 0.02;       // physics step, s
  int decimation = 5;     // physics steps per control step
  int max_episode_steps = 300;
  std::optional<ArenaSpec> arena;  // default_arena(task) when unset
  // Task parameters; kind, arena, velocity bounds and collision radius are
  // filled in from the robot and task names.
  TaskConfig task_params;
  std::optional<RobotSpec> robot_override;
  std::optional<RandomizationConfig> randomization;  // robot default if unset
  bool clamp_twist = true;
  int chunk_size = 64;
  int workers = 0;  // 0 = OpenMP default
  std::vector<CompatibilityOverride> compatibility;

  double control_dt() const { return dt * decimation; }
  // Throws ConfigError.
  void validate() const;
};

enum EventFlag : uint32_t {
  kEventGoalReached = 1u << 0,
  kEventBoundaryExit = 1u << 1,
  kEventCollision = 1u << 2,
  kEventRunaway = 1u << 3,
  kEventTimeout = 1u << 4,
  kEventAllGoals = 1u << 5,
};

// "goal|boundary" style rendering; "" for no events.
std::string events_to_string(uint32_t events);
uint32_t events_from_string(const std::string& s);

// Per-env record of the step just taken. For envs that were auto-reset the
// state and snapshot describe the terminal step, not the new episode.
struct EnvStepInfo {
  uint32_t events = 0;
  bool success_event = false;
  int t = 0;             // 0-based step index within the episode
  uint64_t episode = 0;  // episode the step belongs to
  PlanarState state;
  Vec2 goal;             // active goal (origin for velocity tracking)
  TaskSnapshot snapshot;
  ActionVec action;      // normalized action
  double v_ref = 0.0, w_ref = 0.0;
};

struct StepResult {
  int obs_dim = 0;
  std::vector<double> obs;  // num_envs x obs_dim, row-major
  std::vector<double> reward;
  std::vector<uint8_t> early_term;
  std::vector<uint8_t> clean_term;
  std::vector<EnvStepInfo> info;

  std::span<const double> obs_row(int i) const {
    return std::span<const double>(obs).subspan(size_t(i) * obs_dim, obs_dim);
  }
  bool done(int i) const { return early_term[i] || clean_term[i]; }
};

class EnvBatch;

// Receives every step result in env order after the batch has been merged.
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_step(const EnvBatch& batch, const StepResult& result) = 0;
};

class EnvBatch {
 public:
  // Throws RegistryError, CompatibilityError or ConfigError.
  explicit EnvBatch(EnvConfig config);
  ~EnvBatch();
  EnvBatch(const EnvBatch&) = delete;
  EnvBatch& operator=(const EnvBatch&) = delete;

  const EnvConfig& config() const { return config_; }
  const RobotSpec& robot() const { return robot_; }
  const Task& task() const { return *task_; }
  const RandomizationConfig& randomization() const { return randomization_; }
  int num_envs() const { return config_.num_envs; }
  int action_dim() const { return robot_.control_space.dim; }
  int obs_dim() const { return obs_dim_; }
  int max_episode_steps() const { return config_.max_episode_steps; }

  // Current observations, num_envs x obs_dim.
  std::span<const double> observations() const { return obs_; }

  // Restarts every env at episode 0; returns all observations.
  std::span<const double> reset();
  // Starts the next episode of each masked env; returns their observations
  // in env order. Throws ContractError for an empty or wrongly sized mask.
  std::vector<double> reset(std::span<const uint8_t> mask);

  // Parallel step over env chunks. Throws ContractError on a wrongly sized
  // action batch and SimulationFault naming the lowest faulting env.
  StepResult step(std::span<const double> actions);
  // Single-threaded reference implementation of step.
  StepResult step_serial(std::span<const double> actions);

  const PlanarState& state(int i) const { return states_.at(i); }
  const TaskState& task_state(int i) const { return task_states_.at(i); }
  const RandomizationPlan& plan(int i) const { return plans_.at(i); }
  const MassProps& mass_props(int i) const { return props_.at(i); }
  const ActionVec& prev_action(int i) const { return prev_actions_.at(i); }
  int step_count(int i) const { return steps_.at(i); }
  uint64_t episode(int i) const { return episodes_.at(i); }

  // Moves an env's episode clock without touching its state; used to spread
  // episode boundaries across envs at the start of training.
  void set_step_count(int i, int t);

  // Test hook: overwrites an env's state and rebuilds its observation.
  void set_state(int i, const PlanarState& s);

  // At most one observer; attaching a second throws ContractError.
  void attach(StepObserver* observer);
  void detach(StepObserver* observer);
  bool has_observer() const { return observer_ != nullptr; }

 private:
  void reset_env(int i);
  void write_observation(int i);
  void step_env(int i, std::span<const double> action, StepResult& out);
  StepResult make_result() const;
  void check_actions(std::span<const double> actions) const;
  void finish_step(StepResult& result);

  EnvConfig config_;
  RobotSpec robot_;
  RandomizationConfig randomization_;
  std::unique_ptr<Task> task_;
  std::vector<std::pair<int, int>> angle_pairs_;
  int obs_dim_ = 0;

  // Structure of arrays, one entry per env.
  std::vector<PlanarState> states_;
  std::vector<TaskState> task_states_;
  std::vector<RandomizationPlan> plans_;
  std::vector<MassProps> props_;
  std::vector<ActuatorState> actuators_;
  std::vector<ActionVec> prev_actions_;
  std::vector<int> steps_;
  std::vector<uint64_t> episodes_;
  std::vector<double> obs_;

  StepObserver* observer_ = nullptr;
};

std::unique_ptr<EnvBatch> make_env(const std::string& robot,
                                   const std::string& task, EnvConfig config,
                                   uint64_t global_seed);

// Robot spec and task parameters after applying overrides.
RobotSpec resolve_robot(const EnvConfig& config);
TaskConfig resolve_task(const EnvConfig& config, const RobotSpec& robot);

}  // namespace navforge

#endif  // NAVFORGE_ENV_H_
