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

#include "navforge/tasks.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "navforge/errors.h"

namespace navforge {
namespace {

constexpr double kDegToRad = kPi / 180.0;

double clip(double v, const Range& r) { return std::clamp(v, r.lo, r.hi); }

double speed(const PlanarState& s) {
  return std::hypot(s.twist.vx, s.twist.vy);
}

// Velocity penalty terms shared by the position tasks.
double velocity_terms(const PlanarState& s, const RewardCoefficients& c,
                      double w_lin, double w_ang) {
  return w_lin * clip(speed(s), c.extras.lin_vel_clip) +
         w_ang * clip(std::abs(s.twist.omega), c.extras.ang_vel_clip);
}

void write_twist(const PlanarState& s, std::span<double> out) {
  out[0] = s.twist.vx;
  out[1] = s.twist.vy;
  out[2] = s.twist.omega;
}

void write_goal(const GoalRelative& g, std::span<double> out) {
  out[0] = g.d;
  out[1] = g.cos_theta;
  out[2] = g.sin_theta;
}

double bearing_error(const GoalRelative& g) {
  return std::abs(std::atan2(g.sin_theta, g.cos_theta));
}

class GoToPositionTask : public Task {
 public:
  using Task::Task;

  int core_observation_dim() const override { return 6; }
  std::vector<std::pair<int, int>> angle_pairs() const override {
    return {{4, 5}};
  }

  TaskState sample_goals(CounterRng& rng,
                         const PlanarState& start) const override {
    TaskState ts;
    const Vec2 g = sample_disk(rng, config_.arena.spawn_radius);
    ts.goals = {Pose2{g.x, g.y, 0.0}};
    ts.prev_distance = norm(g - start.pose.position());
    return ts;
  }

  RewardResult compute_reward(const PlanarState& s, TaskState& ts,
                              double shaping) const override {
    const auto& c = config_.coefficients;
    const auto& k = c.goto_position;
    const GoalRelative rel = goal_relative(s.pose, ts.goals.at(0));
    RewardResult r;
    r.reward = k.alpha_i1_pos * std::exp(-rel.d / c.decay.lambda1_dist) +
               k.alpha_i2_head *
                   std::exp(-bearing_error(rel) / c.decay.lambda2_head) +
               velocity_terms(s, c, k.alpha_j1_lin_vel, k.alpha_j2_ang_vel) +
               boundary_terms(s, k.alpha_bns1_bonus, r) + shaping;
    if (!r.boundary_exit && in_collision(s, ts)) {
      r.collision = true;
      r.reward += k.alpha_bns1_bonus;
    }
    ts.prev_distance = rel.d;
    return r;
  }

  TaskDones get_dones(const PlanarState& s, const TaskState& ts, int t,
                      int t_max) const override {
    TaskDones d = Task::get_dones(s, ts, t, t_max);
    d.success_event = snapshot(s, ts).success_condition;
    return d;
  }

  TaskSnapshot snapshot(const PlanarState& s,
                        const TaskState& ts) const override {
    TaskSnapshot snap;
    snap.distance = goal_relative(s.pose, ts.goals.at(0)).d;
    snap.success_condition = snap.distance < config_.thresholds.eps_p;
    return snap;
  }

 protected:
  void write_core(const PlanarState& s, const TaskState& ts,
                  std::span<double> out) const override {
    write_twist(s, out);
    write_goal(goal_relative(s.pose, ts.goals.at(0)), out.subspan(3));
  }
};

class GoToPoseTask : public Task {
 public:
  using Task::Task;

  int core_observation_dim() const override { return 8; }
  std::vector<std::pair<int, int>> angle_pairs() const override {
    return {{4, 5}, {6, 7}};
  }

  TaskState sample_goals(CounterRng& rng,
                         const PlanarState& start) const override {
    TaskState ts;
    const Vec2 g = sample_disk(rng, config_.arena.spawn_radius);
    const double yaw = normalize_angle(rng.uniform(-kPi, kPi));
    ts.goals = {Pose2{g.x, g.y, yaw}};
    ts.prev_distance = norm(g - start.pose.position());
    return ts;
  }

  RewardResult compute_reward(const PlanarState& s, TaskState& ts,
                              double shaping) const override {
    const auto& c = config_.coefficients;
    const auto& k = c.goto_pose;
    const GoalRelative rel = goal_relative(s.pose, ts.goals.at(0));
    const double heading = std::abs(std::atan2(rel.sin_psi, rel.cos_psi));
    RewardResult r;
    r.reward = k.beta_i1_pose_align * std::exp(-rel.d / c.decay.lambda1_dist) *
                   std::exp(-heading / c.decay.lambda2_head) +
               velocity_terms(s, c, k.beta_j1_lin_vel, k.beta_j2_ang_vel) +
               k.beta_pg1_progress * (ts.prev_distance - rel.d) +
               boundary_terms(s, k.beta_bns1_boundary, r) + shaping;
    ts.prev_distance = rel.d;
    return r;
  }

  TaskDones get_dones(const PlanarState& s, const TaskState& ts, int t,
                      int t_max) const override {
    TaskDones d = Task::get_dones(s, ts, t, t_max);
    d.success_event = snapshot(s, ts).success_condition;
    return d;
  }

  TaskSnapshot snapshot(const PlanarState& s,
                        const TaskState& ts) const override {
    const GoalRelative rel = goal_relative(s.pose, ts.goals.at(0));
    TaskSnapshot snap;
    snap.distance = rel.d;
    snap.heading_error = std::abs(std::atan2(rel.sin_psi, rel.cos_psi));
    snap.success_condition =
        rel.d < config_.thresholds.eps_p &&
        snap.heading_error < config_.thresholds.eps_theta_deg * kDegToRad;
    return snap;
  }

 protected:
  void write_core(const PlanarState& s, const TaskState& ts,
                  std::span<double> out) const override {
    write_twist(s, out);
    const GoalRelative rel = goal_relative(s.pose, ts.goals.at(0));
    write_goal(rel, out.subspan(3));
    out[6] = rel.cos_psi;
    out[7] = rel.sin_psi;
  }
};

class GoThroughPositionsTask : public Task {
 public:
  using Task::Task;

  int core_observation_dim() const override {
    return 6 + 3 * config_.future_goals;
  }
  std::vector<std::pair<int, int>> angle_pairs() const override {
    std::vector<std::pair<int, int>> pairs{{4, 5}};
    for (int i = 0; i < config_.future_goals; ++i) {
      pairs.emplace_back(7 + 3 * i, 8 + 3 * i);
    }
    return pairs;
  }

  TaskState sample_goals(CounterRng& rng,
                         const PlanarState& start) const override {
    TaskState ts;
    const double limit = config_.arena.radius - config_.waypoint_margin;
    Vec2 from = start.pose.position();
    double heading = start.pose.yaw;
    for (int i = 0; i < config_.num_waypoints; ++i) {
      bool placed = false;
      for (int a = 0; a < config_.max_sampling_attempts && !placed; ++a) {
        const double dist = rng.uniform(config_.waypoint_distance.lo,
                                        config_.waypoint_distance.hi);
        const double bearing =
            heading + rng.uniform(-config_.waypoint_bearing_halfwidth,
                                  config_.waypoint_bearing_halfwidth);
        const Vec2 p = from + dist * Vec2{std::cos(bearing), std::sin(bearing)};
        if (norm(p) <= limit) {
          ts.goals.push_back({p.x, p.y, 0.0});
          from = p;
          heading = bearing;
          placed = true;
        }
      }
      if (!placed) {
        throw ConfigError("go_through_positions: could not place waypoint " +
                          std::to_string(i) + " inside the arena");
      }
    }
    ts.prev_distance = norm(ts.goals.front().position() - start.pose.position());
    return ts;
  }

  RewardResult compute_reward(const PlanarState& s, TaskState& ts,
                              double shaping) const override {
    const auto& c = config_.coefficients;
    const auto& k = c.go_through_positions;
    RewardResult r;
    ts.consumed_this_step = 0;
    const int n = static_cast<int>(ts.goals.size());
    double reward = shaping +
                    velocity_terms(s, c, k.phi_j1_lin_vel, k.phi_j2_ang_vel) +
                    boundary_terms(s, k.phi_bns1_bonus, r);
    if (ts.active_goal < n) {
      GoalRelative rel = goal_relative(s.pose, ts.goals[ts.active_goal]);
      reward += k.phi_i1_progress * (ts.prev_distance - rel.d) +
                k.phi_i2_head *
                    std::exp(-bearing_error(rel) / c.decay.lambda2_head);
      while (ts.active_goal < n && rel.d < config_.thresholds.eps_tp) {
        ++ts.active_goal;
        ++ts.goals_reached;
        ++ts.consumed_this_step;
        reward += c.extras.waypoint_bonus;
        if (ts.active_goal < n) {
          rel = goal_relative(s.pose, ts.goals[ts.active_goal]);
        }
      }
      ts.prev_distance = ts.active_goal < n ? rel.d : 0.0;
    }
    r.reward = reward;
    return r;
  }

  TaskDones get_dones(const PlanarState& s, const TaskState& ts, int t,
                      int t_max) const override {
    TaskDones d = Task::get_dones(s, ts, t, t_max);
    d.success_event = ts.consumed_this_step > 0;
    if (ts.active_goal >= static_cast<int>(ts.goals.size())) d.clean = true;
    return d;
  }

  TaskSnapshot snapshot(const PlanarState& s,
                        const TaskState& ts) const override {
    TaskSnapshot snap;
    const int n = static_cast<int>(ts.goals.size());
    const int idx = std::min(ts.active_goal, n - 1);
    snap.distance = goal_relative(s.pose, ts.goals.at(idx)).d;
    snap.goals_reached = ts.goals_reached;
    snap.goals_total = n;
    snap.success_condition = ts.consumed_this_step > 0;
    return snap;
  }

 protected:
  void write_core(const PlanarState& s, const TaskState& ts,
                  std::span<double> out) const override {
    write_twist(s, out);
    const int n = static_cast<int>(ts.goals.size());
    const int active = std::min(ts.active_goal, n - 1);
    write_goal(goal_relative(s.pose, ts.goals.at(active)), out.subspan(3));
    for (int i = 0; i < config_.future_goals; ++i) {
      const int idx = std::min(active + 1 + i, n - 1);
      write_goal(goal_relative(s.pose, ts.goals[idx]), out.subspan(6 + 3 * i));
    }
  }
};

class TrackVelocitiesTask : public Task {
 public:
  using Task::Task;

  int core_observation_dim() const override { return 6; }
  std::vector<std::pair<int, int>> angle_pairs() const override { return {}; }

  TaskState sample_goals(CounterRng& rng, const PlanarState&) const override {
    TaskState ts;
    VelocityReferenceState& v = ts.velocity;
    v.rng = CounterRng(rng.next_u64());
    sample_target(v);
    v.from_v = v.to_v;
    v.from_w = v.to_w;
    v.v_ref = v.to_v;
    v.w_ref = v.to_w;
    v.next_switch = v.rng.uniform(config_.velocity_reference.resample_interval.lo,
                                  config_.velocity_reference.resample_interval.hi);
    return ts;
  }

  RewardResult compute_reward(const PlanarState& s, TaskState& ts,
                              double shaping) const override {
    const auto& c = config_.coefficients;
    const auto& k = c.track_velocities;
    const double ev = std::abs(ts.velocity.v_ref - s.twist.vx);
    const double ew = std::abs(ts.velocity.w_ref - s.twist.omega);
    RewardResult r;
    double reward;
    if (c.extras.track_velocities_exponential) {
      reward = k.gamma_i1_lin_vel_err * std::exp(-ev / c.decay.lambda4_vel_err) +
               k.gamma_i2_ang_vel_err * std::exp(-ew / c.decay.lambda4_vel_err);
    } else {
      reward = k.gamma_i1_lin_vel_err * ev + k.gamma_i2_ang_vel_err * ew;
    }
    if (within_tracking_thresholds(ev, ew)) reward += k.gamma_i3_bonus;
    reward += boundary_terms(s, k.gamma_bns1_boundary, r) + shaping;
    ts.sum_abs_lin_err += ev;
    ts.sum_abs_ang_err += ew;
    ++ts.tracked_steps;
    ts.last_lin_err = ev;
    ts.last_ang_err = ew;
    r.reward = reward;
    return r;
  }

  TaskDones get_dones(const PlanarState& s, const TaskState& ts, int t,
                      int t_max) const override {
    TaskDones d = Task::get_dones(s, ts, t, t_max);
    d.success_event = d.clean && !d.early && mean_within_thresholds(ts);
    return d;
  }

  std::pair<double, double> advance_velocity_reference(
      TaskState& ts, double dt) const override {
    VelocityReferenceState& v = ts.velocity;
    const auto& p = config_.velocity_reference;
    v.time += dt;
    if (!p.constant_profile && v.time >= v.next_switch) {
      v.from_v = v.v_ref;
      v.from_w = v.w_ref;
      sample_target(v);
      v.ramp_start = v.time;
      v.next_switch =
          v.time + v.rng.uniform(p.resample_interval.lo, p.resample_interval.hi);
    }
    const double alpha =
        p.ramp_time > 0.0
            ? std::min(1.0, (v.time - v.ramp_start) / p.ramp_time)
            : 1.0;
    v.v_ref = v.from_v + (v.to_v - v.from_v) * alpha;
    v.w_ref = v.from_w + (v.to_w - v.from_w) * alpha;
    return {v.v_ref, v.w_ref};
  }

  TaskSnapshot snapshot(const PlanarState&,
                        const TaskState& ts) const override {
    TaskSnapshot snap;
    snap.lin_vel_error = ts.last_lin_err;
    snap.ang_vel_error = ts.last_ang_err;
    snap.success_condition = mean_within_thresholds(ts);
    return snap;
  }

 protected:
  void write_core(const PlanarState& s, const TaskState& ts,
                  std::span<double> out) const override {
    out[0] = ts.velocity.v_ref - s.twist.vx;
    out[1] = -s.twist.vy;
    out[2] = ts.velocity.w_ref - s.twist.omega;
    out[3] = s.twist.vx;
    out[4] = s.twist.vy;
    out[5] = s.twist.omega;
  }

 private:
  void sample_target(VelocityReferenceState& v) const {
    const auto& b = config_.velocity_bounds;
    v.to_v = v.rng.uniform(b.v_min, b.v_max);
    v.to_w = v.rng.uniform(-b.omega_max, b.omega_max);
  }

  bool within_tracking_thresholds(double ev, double ew) const {
    return ev < config_.thresholds.eps_v &&
           ew < config_.thresholds.eps_w_deg_s * kDegToRad;
  }

  bool mean_within_thresholds(const TaskState& ts) const {
    if (ts.tracked_steps == 0) return false;
    return within_tracking_thresholds(ts.sum_abs_lin_err / ts.tracked_steps,
                                      ts.sum_abs_ang_err / ts.tracked_steps);
  }
};

class GoToPositionObstaclesTask : public GoToPositionTask {
 public:
  using GoToPositionTask::GoToPositionTask;

  static constexpr int kObservedObstacles = 3;

  int extra_observation_dim() const override { return 2 * kObservedObstacles; }

  TaskState sample_goals(CounterRng& rng,
                         const PlanarState& start) const override {
    TaskState ts = GoToPositionTask::sample_goals(rng, start);
    const Vec2 goal = ts.goals[0].position();
    const Vec2 origin = start.pose.position();
    int attempts = 0;
    while (static_cast<int>(ts.obstacles.size()) < config_.num_obstacles) {
      if (++attempts > config_.max_sampling_attempts) {
        throw ConfigError(
            "goto_position_obstacles: could not place " +
            std::to_string(config_.num_obstacles) + " obstacles");
      }
      Obstacle o;
      o.center = sample_disk(rng, config_.arena.spawn_radius);
      o.radius = rng.uniform(config_.obstacle_radius.lo,
                             config_.obstacle_radius.hi);
      const double keep_out =
          o.radius + config_.collision_radius + config_.obstacle_clearance;
      if (norm(o.center - origin) < keep_out ||
          norm(o.center - goal) < keep_out) {
        continue;
      }
      const bool overlaps = std::any_of(
          ts.obstacles.begin(), ts.obstacles.end(), [&](const Obstacle& other) {
            return norm(o.center - other.center) < o.radius + other.radius;
          });
      if (!overlaps) ts.obstacles.push_back(o);
    }
    return ts;
  }

 protected:
  void write_extra(const PlanarState& s, const TaskState& ts,
                   std::span<double> out) const override {
    std::array<std::pair<double, Vec2>, kObservedObstacles> nearest;
    nearest.fill({std::numeric_limits<double>::infinity(), Vec2{}});
    for (const Obstacle& o : ts.obstacles) {
      const Vec2 rel = world_to_body(s.pose, o.center);
      const double d = norm(rel);
      for (int i = 0; i < kObservedObstacles; ++i) {
        if (d < nearest[i].first) {
          for (int j = kObservedObstacles - 1; j > i; --j) {
            nearest[j] = nearest[j - 1];
          }
          nearest[i] = {d, rel};
          break;
        }
      }
    }
    for (int i = 0; i < kObservedObstacles; ++i) {
      out[2 * i] = nearest[i].second.x;
      out[2 * i + 1] = nearest[i].second.y;
    }
  }
};

}  // namespace

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kGoToPosition: return "goto_position";
    case TaskKind::kGoToPose: return "goto_pose";
    case TaskKind::kGoThroughPositions: return "go_through_positions";
    case TaskKind::kTrackVelocities: return "track_velocities";
    case TaskKind::kGoToPositionObstacles: return "goto_position_obstacles";
  }
  return "?";
}

std::vector<std::string> task_names() {
  return {"goto_position", "goto_pose", "go_through_positions",
          "track_velocities", "goto_position_obstacles"};
}

TaskKind parse_task_kind(std::string_view name) {
  for (TaskKind k :
       {TaskKind::kGoToPosition, TaskKind::kGoToPose,
        TaskKind::kGoThroughPositions, TaskKind::kTrackVelocities,
        TaskKind::kGoToPositionObstacles}) {
    if (to_string(k) == name) return k;
  }
  std::string msg = "unknown task '" + std::string(name) + "'; available:";
  for (const auto& n : task_names()) msg += " " + n;
  throw RegistryError(msg);
}

ArenaSpec default_arena(TaskKind kind) {
  // Velocity tracking drives away from the origin for the whole episode.
  if (kind == TaskKind::kTrackVelocities) return {100.0, 0.0};
  return {6.0, 3.0};
}

void RewardCoefficients::validate() const {
  if (!(decay.lambda1_dist > 0.0) || !(decay.lambda2_head > 0.0) ||
      !(decay.lambda3_bnd > 0.0) || !(decay.lambda4_vel_err > 0.0)) {
    throw ConfigError("reward decay constants must be > 0");
  }
  if (!extras.lin_vel_clip.well_ordered() ||
      !extras.ang_vel_clip.well_ordered()) {
    throw ConfigError("velocity clip ranges must be well ordered");
  }
}

void SuccessThresholds::validate() const {
  if (!(eps_p > 0.0) || !(eps_theta_deg > 0.0) || !(eps_tp > 0.0) ||
      !(eps_v > 0.0) || !(eps_w_deg_s > 0.0)) {
    throw ConfigError("success thresholds must be > 0");
  }
}

void TaskConfig::validate() const {
  coefficients.validate();
  thresholds.validate();
  if (!(arena.radius > thresholds.eps_p)) {
    throw ConfigError("arena radius must exceed eps_p");
  }
  if (arena.spawn_radius < 0.0 || arena.spawn_radius > arena.radius) {
    throw ConfigError("spawn radius must lie in [0, arena radius]");
  }
  if (future_goals < 0) throw ConfigError("future_goals must be >= 0");
  if (kind == TaskKind::kGoThroughPositions) {
    if (num_waypoints < 1) throw ConfigError("num_waypoints must be >= 1");
    if (!waypoint_distance.well_ordered() || waypoint_distance.lo <= 0.0) {
      throw ConfigError("waypoint_distance must be a positive range");
    }
    if (arena.radius - waypoint_margin <= 0.0) {
      throw ConfigError("waypoint_margin leaves no room in the arena");
    }
  }
  if (kind == TaskKind::kGoToPositionObstacles && num_obstacles < 3) {
    throw ConfigError("the obstacle variant needs at least 3 obstacles");
  }
  if (!obstacle_radius.well_ordered() ||
      !velocity_reference.resample_interval.well_ordered() ||
      velocity_reference.resample_interval.lo <= 0.0) {
    throw ConfigError("bad obstacle or velocity reference ranges");
  }
  if (max_sampling_attempts < 1) {
    throw ConfigError("max_sampling_attempts must be >= 1");
  }
}

Task::Task(TaskConfig config) : config_(std::move(config)) {
  config_.validate();
}

void Task::build_observation(const PlanarState& state, const TaskState& ts,
                             const ActionVec& prev_action,
                             std::span<double> out) const {
  const int core = core_observation_dim();
  if (static_cast<int>(out.size()) != observation_dim(prev_action.dim())) {
    throw ContractError("build_observation: output has wrong size");
  }
  if (kind() != TaskKind::kTrackVelocities && ts.goals.empty()) {
    throw ContractError("build_observation: task state has no goal");
  }
  write_core(state, ts, out.first(core));
  for (int i = 0; i < prev_action.dim(); ++i) out[core + i] = prev_action[i];
  write_extra(state, ts, out.subspan(core + prev_action.dim()));
}

TaskDones Task::get_dones(const PlanarState& state, const TaskState& ts,
                          int t, int t_max) const {
  TaskDones d;
  d.early = outside_arena(state) || in_collision(state, ts);
  d.clean = t >= t_max - 1;
  return d;
}

std::pair<double, double> Task::advance_velocity_reference(TaskState&,
                                                           double) const {
  throw ContractError("advance_velocity_reference: task " + to_string(kind()) +
                      " has no velocity reference");
}

bool Task::outside_arena(const PlanarState& state) const {
  return norm(state.pose.position()) > config_.arena.radius;
}

bool Task::in_collision(const PlanarState& state, const TaskState& ts) const {
  for (const Obstacle& o : ts.obstacles) {
    if (norm(state.pose.position() - o.center) <
        o.radius + config_.collision_radius) {
      return true;
    }
  }
  return false;
}

double Task::boundary_terms(const PlanarState& state, double terminal_penalty,
                            RewardResult& result) const {
  const auto& c = config_.coefficients;
  const double to_boundary =
      std::max(0.0, config_.arena.radius - norm(state.pose.position()));
  double r = c.extras.boundary_proximity_weight *
             std::exp(-to_boundary / c.decay.lambda3_bnd);
  if (outside_arena(state)) {
    result.boundary_exit = true;
    r += terminal_penalty;
  }
  return r;
}

GoalRelative goal_relative(const Pose2& pose, const Pose2& goal) {
  GoalRelative g;
  const Vec2 b = world_to_body(pose, goal.position());
  g.d = norm(b);
  if (g.d > 0.0) {
    g.cos_theta = b.x / g.d;
    g.sin_theta = b.y / g.d;
  }
  const double psi = normalize_angle(goal.yaw - pose.yaw);
  g.cos_psi = std::cos(psi);
  g.sin_psi = std::sin(psi);
  return g;
}

Vec2 sample_disk(CounterRng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = rng.uniform(-kPi, kPi);
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::unique_ptr<Task> make_task(TaskConfig config) {
  switch (config.kind) {
    case TaskKind::kGoToPosition:
      return std::make_unique<GoToPositionTask>(std::move(config));
    case TaskKind::kGoToPose:
      return std::make_unique<GoToPoseTask>(std::move(config));
    case TaskKind::kGoThroughPositions:
      return std::make_unique<GoThroughPositionsTask>(std::move(config));
    case TaskKind::kTrackVelocities:
      return std::make_unique<TrackVelocitiesTask>(std::move(config));
    case TaskKind::kGoToPositionObstacles:
      return std::make_unique<GoToPositionObstaclesTask>(std::move(config));
  }
  throw RegistryError("unhandled task kind");
}

std::unique_ptr<Task> make_task(std::string_view name, TaskConfig config) {
  config.kind = parse_task_kind(name);
  return make_task(std::move(config));
}

}  // namespace navforge
