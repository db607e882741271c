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

#ifndef NAVFORGE_TASKS_H_
#define NAVFORGE_TASKS_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "navforge/action.h"
#include "navforge/planar.h"
#include "navforge/randomization.h"
#include "navforge/rng.h"

namespace navforge {

enum class TaskKind {
  kGoToPosition,
  kGoToPose,
  kGoThroughPositions,
  kTrackVelocities,
  kGoToPositionObstacles,
};

std::string to_string(TaskKind kind);
// "goto_position", "goto_pose", "go_through_positions", "track_velocities",
// "goto_position_obstacles".
std::vector<std::string> task_names();
// Throws RegistryError listing the available tasks.
TaskKind parse_task_kind(std::string_view name);

// Circular arena centered at the origin.
struct ArenaSpec {
  double radius = 6.0;
  double spawn_radius = 3.0;

  friend bool operator==(const ArenaSpec&, const ArenaSpec&) = default;
};

ArenaSpec default_arena(TaskKind kind);

// Reward coefficient table, one block per task, with the shared decay
// constants. Field names follow the shipped coefficient file.
struct RewardCoefficients {
  struct Decay {
    double lambda1_dist = 1.0;
    double lambda2_head = 0.25;
    double lambda3_bnd = 1.0;
    double lambda4_vel_err = 1.0;
  } decay;
  struct GoToPosition {
    double alpha_i1_pos = 1.0;
    double alpha_i2_head = 0.25;
    double alpha_j1_lin_vel = -0.05;
    double alpha_j2_ang_vel = -0.1;
    double alpha_bns1_bonus = -10.0;
  } goto_position;
  struct GoToPose {
    double beta_i1_pose_align = 1.0;
    double beta_j1_lin_vel = -0.05;
    double beta_j2_ang_vel = -0.05;
    double beta_bns1_boundary = -10.0;
    double beta_pg1_progress = 0.2;
  } goto_pose;
  struct GoThroughPositions {
    double phi_i1_progress = 1.0;
    double phi_i2_head = 0.05;
    double phi_j1_lin_vel = 0.0;
    double phi_j2_ang_vel = -0.05;
    double phi_bns1_bonus = -10.0;
  } go_through_positions;
  struct TrackVelocities {
    double gamma_i1_lin_vel_err = -1.0;
    double gamma_i2_ang_vel_err = -0.5;
    double gamma_i3_bonus = 0.0;
    double gamma_bns1_boundary = -10.0;
  } track_velocities;
  // Values not covered by the coefficient table.
  struct Extras {
    Range lin_vel_clip{0.0, 1.0};    // m/s
    Range ang_vel_clip{0.0, 2.0};    // rad/s
    double boundary_proximity_weight = 0.0;  // w_b for exp(-d_b / lambda3)
    double waypoint_bonus = 10.0;
    bool track_velocities_exponential = false;
  } extras;

  void validate() const;
};

struct SuccessThresholds {
  double eps_p = 0.1;           // m
  double eps_theta_deg = 10.0;  // deg
  double eps_tp = 0.2;          // m
  double eps_v = 0.2;           // m/s
  double eps_w_deg_s = 10.0;    // deg/s

  void validate() const;
};

struct VelocityReferenceParams {
  Range resample_interval{2.0, 4.0};  // s
  double ramp_time = 0.5;             // s
  bool constant_profile = false;      // hold the first sample forever
};

struct TaskConfig {
  TaskKind kind = TaskKind::kGoToPosition;
  ArenaSpec arena;
  RewardCoefficients coefficients;
  SuccessThresholds thresholds;
  int future_goals = 1;            // GoThroughPositions lookahead n
  int num_waypoints = 20;
  Range waypoint_distance{1.0, 2.0};
  double waypoint_bearing_halfwidth = kPi;
  double waypoint_margin = 1.0;    // waypoints stay within radius - margin
  int num_obstacles = 4;
  Range obstacle_radius{0.2, 0.4};
  double obstacle_clearance = 0.5;  // from start and goal, beyond radii
  double collision_radius = 0.25;   // robot body radius
  VelocityReferenceBounds velocity_bounds;
  VelocityReferenceParams velocity_reference;
  int max_sampling_attempts = 1000;

  void validate() const;
};

struct Obstacle {
  Vec2 center;
  double radius = 0.0;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct VelocityReferenceState {
  CounterRng rng;
  double time = 0.0;
  double next_switch = 0.0;
  double ramp_start = 0.0;
  double from_v = 0.0, from_w = 0.0;
  double to_v = 0.0, to_w = 0.0;
  double v_ref = 0.0, w_ref = 0.0;

  friend bool operator==(const VelocityReferenceState&,
                         const VelocityReferenceState&) = default;
};

struct TaskState {
  // World goals; position tasks use goals[0], GoThroughPositions consumes
  // them in order.
  std::vector<Pose2> goals;
  int active_goal = 0;
  int goals_reached = 0;
  int consumed_this_step = 0;
  double prev_distance = 0.0;
  VelocityReferenceState velocity;
  std::vector<Obstacle> obstacles;
  // Running tracking statistics (TrackVelocities).
  double sum_abs_lin_err = 0.0;
  double sum_abs_ang_err = 0.0;
  int tracked_steps = 0;
  // Errors of the most recent reward evaluation.
  double last_lin_err = 0.0;
  double last_ang_err = 0.0;

  friend bool operator==(const TaskState&, const TaskState&) = default;
};

// Relative goal quantities in the body frame.
struct GoalRelative {
  double d = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  double cos_psi = 1.0;
  double sin_psi = 0.0;
};

struct RewardResult {
  double reward = 0.0;
  bool boundary_exit = false;
  bool collision = false;
};

struct TaskDones {
  bool early = false;
  bool clean = false;
  bool success_event = false;
};

// Per-step quantities consumed by the metrics layer.
struct TaskSnapshot {
  double distance = 0.0;          // to the active (or last) goal
  double heading_error = 0.0;     // rad, |goal yaw - yaw| (GoToPose)
  double lin_vel_error = 0.0;     // |e_v|
  double ang_vel_error = 0.0;     // |e_omega|
  int goals_reached = 0;
  int goals_total = 0;
  bool success_condition = false; // threshold predicate at this step
};

class Task {
 public:
  explicit Task(TaskConfig config);
  virtual ~Task() = default;

  TaskKind kind() const { return config_.kind; }
  const TaskConfig& config() const { return config_; }

  // Core observation length (before the previous action).
  virtual int core_observation_dim() const = 0;
  // Extra block appended after the previous action (obstacles).
  virtual int extra_observation_dim() const { return 0; }
  int observation_dim(int action_dim) const {
    return core_observation_dim() + action_dim + extra_observation_dim();
  }
  // (cos, sin) index pairs inside the observation.
  virtual std::vector<std::pair<int, int>> angle_pairs() const = 0;

  // Fresh goals for an episode starting at `start`. Throws ConfigError when
  // rejection sampling exhausts its attempts.
  virtual TaskState sample_goals(CounterRng& rng,
                                 const PlanarState& start) const = 0;

  // Writes observation_dim(prev_action.dim()) values into `out`.
  void build_observation(const PlanarState& state, const TaskState& ts,
                         const ActionVec& prev_action,
                         std::span<double> out) const;

  // Reward for the transition into `state`; refreshes prev_distance and
  // consumes reached waypoints. `shaping` is the robot shaping term.
  virtual RewardResult compute_reward(const PlanarState& state, TaskState& ts,
                                      double shaping) const = 0;

  // t is the 0-based index of the step just taken.
  virtual TaskDones get_dones(const PlanarState& state, const TaskState& ts,
                              int t, int t_max) const;

  // Throws ContractError unless this is TrackVelocities.
  virtual std::pair<double, double> advance_velocity_reference(
      TaskState& ts, double dt) const;

  virtual TaskSnapshot snapshot(const PlanarState& state,
                                const TaskState& ts) const = 0;

  bool outside_arena(const PlanarState& state) const;
  bool in_collision(const PlanarState& state, const TaskState& ts) const;

 protected:
  virtual void write_core(const PlanarState& state, const TaskState& ts,
                          std::span<double> out) const = 0;
  virtual void write_extra(const PlanarState&, const TaskState&,
                           std::span<double>) const {}

  // Boundary proximity term plus the terminal boundary penalty.
  double boundary_terms(const PlanarState& state, double terminal_penalty,
                        RewardResult& result) const;

  TaskConfig config_;
};

// Relative position/heading of `goal` seen from `pose`.
GoalRelative goal_relative(const Pose2& pose, const Pose2& goal);

// Uniform sample in a disk of the given radius.
Vec2 sample_disk(CounterRng& rng, double radius);

// Factory; throws RegistryError for unknown names.
std::unique_ptr<Task> make_task(std::string_view name, TaskConfig config);
std::unique_ptr<Task> make_task(TaskConfig config);

}  // namespace navforge

#endif  // NAVFORGE_TASKS_H_
