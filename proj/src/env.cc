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

#include "navforge/env.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "navforge/errors.h"
#include "navforge/rng.h"

namespace navforge {
namespace {

struct EventName {
  EventFlag flag;
  const char* name;
};

constexpr EventName kEventNames[] = {
    {kEventGoalReached, "goal"},   {kEventBoundaryExit, "boundary"},
    {kEventCollision, "collision"}, {kEventRunaway, "runaway"},
    {kEventTimeout, "timeout"},    {kEventAllGoals, "all_goals"},
};

}  // namespace

bool pair_allowed(const std::string& robot, const std::string& task,
                  std::span<const CompatibilityOverride> overrides) {
  // Without heading control the vessel cannot meet an orientation goal.
  bool allowed = !(robot == "kingfisher" && task == "goto_pose");
  for (const auto& o : overrides) {
    if (o.robot == robot && o.task == task) allowed = o.allowed;
  }
  return allowed;
}

void EnvConfig::validate() const {
  if (num_envs < 1) throw ConfigError("num_envs must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (decimation < 1) throw ConfigError("decimation must be >= 1");
  if (max_episode_steps < 1) {
    throw ConfigError("max_episode_steps must be >= 1");
  }
  if (chunk_size < 1) throw ConfigError("chunk_size must be >= 1");
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

std::string events_to_string(uint32_t events) {
  std::string out;
  for (const auto& e : kEventNames) {
    if (events & e.flag) {
      if (!out.empty()) out += '|';
      out += e.name;
    }
  }
  return out;
}

uint32_t events_from_string(const std::string& s) {
  uint32_t events = 0;
  std::stringstream in(s);
  std::string token;
  while (std::getline(in, token, '|')) {
    if (token.empty()) continue;
    bool found = false;
    for (const auto& e : kEventNames) {
      if (token == e.name) {
        events |= e.flag;
        found = true;
      }
    }
    if (!found) throw FormatError("unknown event tag '" + token + "'");
  }
  return events;
}

RobotSpec resolve_robot(const EnvConfig& config) {
  RobotSpec robot = config.robot_override ? *config.robot_override
                                          : default_robot_spec(config.robot);
  if (robot.name != config.robot) {
    throw ConfigError("robot override '" + robot.name +
                      "' does not match robot '" + config.robot + "'");
  }
  if (config.randomization) robot.randomization = *config.randomization;
  robot.validate();
  return robot;
}

TaskConfig resolve_task(const EnvConfig& config, const RobotSpec& robot) {
  TaskConfig t = config.task_params;
  t.kind = parse_task_kind(config.task);
  t.arena = config.arena ? *config.arena : default_arena(t.kind);
  t.velocity_bounds = robot.velocity_reference;
  t.collision_radius = robot.body_radius;
  t.validate();
  return t;
}

EnvBatch::EnvBatch(EnvConfig config) : config_(std::move(config)) {
  config_.validate();
  robot_ = resolve_robot(config_);
  TaskConfig task_cfg = resolve_task(config_, robot_);
  if (!pair_allowed(config_.robot, config_.task, config_.compatibility)) {
    throw CompatibilityError("robot '" + config_.robot + "' with task '" +
                             config_.task +
                             "' is disabled by the compatibility matrix");
  }
  task_ = make_task(std::move(task_cfg));
  randomization_ = robot_.randomization;
  obs_dim_ = task_->observation_dim(action_dim());
  randomization_.validate(action_dim(), obs_dim_);
  angle_pairs_ = task_->angle_pairs();

  const size_t n = config_.num_envs;
  states_.resize(n);
  task_states_.resize(n);
  plans_.resize(n);
  props_.resize(n);
  actuators_.resize(n);
  prev_actions_.assign(n, ActionVec(action_dim()));
  steps_.assign(n, 0);
  episodes_.assign(n, 0);
  obs_.assign(n * obs_dim_, 0.0);
  for (int i = 0; i < num_envs(); ++i) reset_env(i);
}

EnvBatch::~EnvBatch() = default;

void EnvBatch::reset_env(int i) {
  const uint64_t seed = config_.seed;
  const uint64_t ep = episodes_[i];
  CounterRng start = CounterRng::for_stream(seed, i, ep, StreamId::kStart);
  PlanarState s;
  s.pose.yaw = normalize_angle(start.uniform(-kPi, kPi));
  states_[i] = s;

  CounterRng goals = CounterRng::for_stream(seed, i, ep, StreamId::kGoals);
  task_states_[i] = task_->sample_goals(goals, s);

  ResetSample rs = on_reset(randomization_, seed, i, ep, robot_.mass_props,
                            action_dim(), obs_dim_);
  plans_[i] = std::move(rs.plan);
  props_[i] = rs.props;
  actuators_[i] = ActuatorState{};
  prev_actions_[i] = ActionVec(action_dim());
  steps_[i] = 0;
  write_observation(i);
}

void EnvBatch::write_observation(int i) {
  std::span<double> row =
      std::span<double>(obs_).subspan(size_t(i) * obs_dim_, obs_dim_);
  task_->build_observation(states_[i], task_states_[i], prev_actions_[i], row);
  on_observation(randomization_, plans_[i], row, angle_pairs_);
}

std::span<const double> EnvBatch::reset() {
  for (int i = 0; i < num_envs(); ++i) {
    episodes_[i] = 0;
    reset_env(i);
  }
  return obs_;
}

std::vector<double> EnvBatch::reset(std::span<const uint8_t> mask) {
  if (static_cast<int>(mask.size()) != num_envs()) {
    throw ContractError("reset: mask size does not match num_envs");
  }
  if (std::none_of(mask.begin(), mask.end(), [](uint8_t m) { return m; })) {
    throw ContractError("reset: empty mask");
  }
  std::vector<double> out;
  for (int i = 0; i < num_envs(); ++i) {
    if (!mask[i]) continue;
    ++episodes_[i];
    reset_env(i);
    const auto row = std::span<const double>(obs_).subspan(
        size_t(i) * obs_dim_, obs_dim_);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

void EnvBatch::set_state(int i, const PlanarState& s) {
  states_.at(i) = s;
  write_observation(i);
}

void EnvBatch::set_step_count(int i, int t) {
  if (t < 0 || t >= config_.max_episode_steps) {
    throw ContractError("set_step_count: t outside [0, max_episode_steps)");
  }
  steps_.at(i) = t;
}

void EnvBatch::attach(StepObserver* observer) {
  if (observer == nullptr) throw ContractError("attach: null observer");
  if (observer_ != nullptr) {
    throw ContractError("attach: an observer is already attached");
  }
  observer_ = observer;
}

void EnvBatch::detach(StepObserver* observer) {
  if (observer_ == observer) observer_ = nullptr;
}

void EnvBatch::check_actions(std::span<const double> actions) const {
  if (actions.size() != size_t(num_envs()) * action_dim()) {
    throw ContractError("step: expected " +
                        std::to_string(num_envs() * action_dim()) +
                        " action values, got " +
                        std::to_string(actions.size()));
  }
}

StepResult EnvBatch::make_result() const {
  StepResult r;
  r.obs_dim = obs_dim_;
  r.reward.assign(num_envs(), 0.0);
  r.early_term.assign(num_envs(), 0);
  r.clean_term.assign(num_envs(), 0);
  r.info.resize(num_envs());
  return r;
}

void EnvBatch::step_env(int i, std::span<const double> action,
                        StepResult& out) {
  const double control_dt = config_.control_dt();
  const ProcessedAction pa = process_actions(robot_, action);
  const ActionVec randomized = on_action(randomization_, plans_[i],
                                         pa.normalized);
  const ActionVec command = command_from_normalized(robot_, randomized);
  double magnitude = 0.0;
  for (int k = 0; k < pa.normalized.dim(); ++k) {
    magnitude += std::abs(pa.normalized[k]);
  }
  const int t = steps_[i];
  const StepSample ss =
      on_step(randomization_, plans_[i], t, props_[i], control_dt, magnitude);
  props_[i] = ss.props;

  PlanarState& s = states_[i];
  for (int k = 0; k < config_.decimation; ++k) {
    const Wrench2 w =
        apply_actions(robot_, command, s, actuators_[i], config_.dt) +
        ss.disturbance;
    s = integrate_step(s, w, props_[i], robot_.damping, config_.dt);
    s.twist = constrain_twist(robot_, s.twist);
    if (config_.clamp_twist) {
      s.twist = clamp_twist(s.twist, robot_.vel_limits.v_max,
                            robot_.vel_limits.omega_max);
    }
  }

  TaskState& ts = task_states_[i];
  const double shaping =
      robot_shaping_reward(robot_, pa.normalized, prev_actions_[i]);
  const RewardResult rr = task_->compute_reward(s, ts, shaping);
  const TaskDones td = task_->get_dones(s, ts, t, config_.max_episode_steps);
  const RobotDones rd = robot_get_dones(robot_, s);

  EnvStepInfo& info = out.info[i];
  info.t = t;
  info.episode = episodes_[i];
  info.state = s;
  info.action = pa.normalized;
  info.success_event = td.success_event;
  info.snapshot = task_->snapshot(s, ts);
  info.v_ref = ts.velocity.v_ref;
  info.w_ref = ts.velocity.w_ref;
  if (!ts.goals.empty()) {
    const int g = std::min<int>(ts.active_goal, ts.goals.size() - 1);
    info.goal = ts.goals[g].position();
  }
  if (task_->kind() == TaskKind::kTrackVelocities) {
    task_->advance_velocity_reference(ts, control_dt);
  }

  uint32_t ev = 0;
  if (td.success_event) ev |= kEventGoalReached;
  if (rr.boundary_exit) ev |= kEventBoundaryExit;
  if (rr.collision || task_->in_collision(s, ts)) ev |= kEventCollision;
  if (rd.early) ev |= kEventRunaway;
  const bool time_out = t >= config_.max_episode_steps - 1;
  if (time_out) ev |= kEventTimeout;
  if (task_->kind() == TaskKind::kGoThroughPositions &&
      ts.active_goal >= static_cast<int>(ts.goals.size())) {
    ev |= kEventAllGoals;
  }
  info.events = ev;

  const bool early = rd.early || td.early;
  const bool clean = rd.clean || td.clean || time_out;
  out.reward[i] = rr.reward;
  out.early_term[i] = early;
  out.clean_term[i] = clean;

  prev_actions_[i] = pa.normalized;
  steps_[i] = t + 1;
  if (early || clean) {
    ++episodes_[i];
    reset_env(i);
  } else {
    write_observation(i);
  }
}

void EnvBatch::finish_step(StepResult& result) {
  result.obs = obs_;
  if (observer_ != nullptr) observer_->on_step(*this, result);
}

StepResult EnvBatch::step_serial(std::span<const double> actions) {
  check_actions(actions);
  StepResult result = make_result();
  const int adim = action_dim();
  for (int i = 0; i < num_envs(); ++i) {
    try {
      step_env(i, actions.subspan(size_t(i) * adim, adim), result);
    } catch (const SimulationFault& f) {
      throw SimulationFault(f.message(), i);
    }
  }
  finish_step(result);
  return result;
}

StepResult EnvBatch::step(std::span<const double> actions) {
  check_actions(actions);
  StepResult result = make_result();
  const int n = num_envs();
  const int adim = action_dim();
  const int chunk = config_.chunk_size;
  int fault_env = std::numeric_limits<int>::max();
  std::exception_ptr fault;
  const int threads =
      config_.workers > 0 ? config_.workers : omp_get_max_threads();

#pragma omp parallel for schedule(static, chunk) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      step_env(i, actions.subspan(size_t(i) * adim, adim), result);
    } catch (...) {
#pragma omp critical(navforge_env_fault)
      if (i < fault_env) {
        fault_env = i;
        fault = std::current_exception();
      }
    }
  }

  if (fault) {
    try {
      std::rethrow_exception(fault);
    } catch (const SimulationFault& f) {
      throw SimulationFault(f.message(), fault_env);
    }
  }
  finish_step(result);
  return result;
}

std::unique_ptr<EnvBatch> make_env(const std::string& robot,
                                   const std::string& task, EnvConfig config,
                                   uint64_t global_seed) {
  config.robot = robot;
  config.task = task;
  config.seed = global_seed;
  return std::make_unique<EnvBatch>(std::move(config));
}

}  // namespace navforge
