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

#include "navforge/robots.h"

#include <algorithm>
#include <cmath>

#include "navforge/errors.h"

namespace navforge {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double clip_unit(double v) {
  if (std::isnan(v)) return 0.0;
  return std::clamp(v, -1.0, 1.0);
}

RandomizationConfig kick_wrench_randomization(double mass_delta) {
  RandomizationConfig dr;
  dr.mass.enable = true;
  dr.mass.randomization_modes = {MassMode::kUniform};
  dr.mass.max_delta = mass_delta;
  dr.com.enable = true;
  dr.com.randomization_modes = {ComMode::kUniform};
  dr.com.max_delta = 0.05;
  dr.wrench.enable = true;
  dr.wrench.randomization_modes = {WrenchMode::kKickUniform};
  dr.wrench.uniform_force = {0.0, 0.25};
  dr.wrench.uniform_torque = {0.0, 0.05};
  dr.wrench.push_interval = 5;
  return dr;
}

void add_action_perturbations(RandomizationConfig& dr) {
  dr.noisy_actions.enable = true;
  dr.noisy_actions.randomization_modes = {NoiseMode::kUniform};
  dr.noisy_actions.slices = {{0, 2}};
  dr.noisy_actions.max_delta = {0.025};
  dr.noisy_actions.clip_actions = {{-1.0, 1.0}};
  dr.actions_rescaler.enable = true;
  dr.actions_rescaler.randomization_modes = {NoiseMode::kUniform};
  dr.actions_rescaler.slices = {{0, 2}};
  dr.actions_rescaler.rescaling_ranges = {{0.8, 1.0}};
  dr.actions_rescaler.clip_actions = {{-1.0, 1.0}};
}

RobotSpec floating_platform() {
  RobotSpec s;
  s.name = "floating_platform";
  s.control_space = {ControlKind::kBinary, 8};
  s.mass_props = {5.0, 0.5 * 5.0 * 0.25 * 0.25, {0.0, 0.0}};
  s.actuation = default_thruster_layout(0.25, 1.0);
  s.vel_limits = {1.0, 2.0};
  s.shaping.weight = -0.01;
  s.body_radius = 0.25;
  s.velocity_reference = {0.0, 0.3, 0.3};
  s.randomization = kick_wrench_randomization(0.25);
  return s;
}

RobotSpec kingfisher() {
  RobotSpec s;
  s.name = "kingfisher";
  s.control_space = {ControlKind::kContinuous, 2};
  s.mass_props = {35.0, 8.0, {0.0, 0.0}};
  // Terminal surge speed with both propellers at full forward thrust:
  // 16 v + 12 v^2 = 80 N  ->  v = 2 m/s.
  s.damping.linear = {16.0, 100.0, 20.0};
  s.damping.quadratic = {12.0, 100.0, 15.0};
  KingfisherParams k;
  k.propeller_positions = {Vec2{-0.4, 0.35}, Vec2{-0.4, -0.35}};
  k.max_thrust_fwd = 40.0;
  k.max_thrust_rev = 20.0;
  k.first_order_lag_tau = 0.2;
  s.actuation = k;
  s.vel_limits = {3.0, 2.0};
  s.shaping.weight = -0.02;
  s.body_radius = 0.7;
  s.velocity_reference = {0.0, 1.0, 0.3};
  s.randomization = kick_wrench_randomization(2.0);
  add_action_perturbations(s.randomization);
  return s;
}

RobotSpec turtlebot2() {
  RobotSpec s;
  s.name = "turtlebot2";
  s.control_space = {ControlKind::kContinuous, 2};
  s.mass_props = {6.3, 0.1, {0.0, 0.0}};
  s.actuation = Turtlebot2Params{};
  s.vel_limits = {0.6, 2.0};
  s.shaping.weight = -0.02;
  s.body_radius = 0.18;
  s.velocity_reference = {0.0, 0.3, 0.5};
  RandomizationConfig& dr = s.randomization;
  dr.mass.enable = true;
  dr.mass.randomization_modes = {MassMode::kUniform};
  dr.mass.max_delta = 0.1;
  dr.com.enable = true;
  dr.com.randomization_modes = {ComMode::kNormal};
  dr.com.max_delta = 0.05;
  dr.com.std = 0.01;
  add_action_perturbations(dr);
  return s;
}

}  // namespace

FloatingPlatformParams default_thruster_layout(double radius, double force) {
  // Four mounting points at 45 + 90k degrees, each holding a pair of
  // tangential thrusters pointing in opposite directions.
  FloatingPlatformParams p;
  p.thrust_force = force;
  for (int corner = 0; corner < 4; ++corner) {
    const double phi = kPi / 4.0 + corner * kPi / 2.0;
    const Vec2 pos{radius * std::cos(phi), radius * std::sin(phi)};
    const Vec2 tangent{-std::sin(phi), std::cos(phi)};
    p.thruster_positions[2 * corner] = pos;
    p.thruster_directions[2 * corner] = tangent;
    p.thruster_positions[2 * corner + 1] = pos;
    p.thruster_directions[2 * corner + 1] = {-tangent.x, -tangent.y};
  }
  return p;
}

std::vector<std::string> robot_names() {
  return {"floating_platform", "kingfisher", "turtlebot2"};
}

RobotSpec default_robot_spec(std::string_view name) {
  if (name == "floating_platform") return floating_platform();
  if (name == "kingfisher") return kingfisher();
  if (name == "turtlebot2") return turtlebot2();
  std::string msg = "unknown robot '" + std::string(name) + "'; available:";
  for (const auto& n : robot_names()) msg += " " + n;
  throw RegistryError(msg);
}

void RobotSpec::validate() const {
  if (!mass_props.valid()) throw ConfigError(name + ": invalid mass_props");
  if (shaping.weight > 0.0) {
    throw ConfigError(name + ": shaping weight must be <= 0");
  }
  if (!(vel_limits.v_max > 0.0) || !(vel_limits.omega_max > 0.0)) {
    throw ConfigError(name + ": velocity limits must be > 0");
  }
  if (!(runaway_factor > 1.0)) {
    throw ConfigError(name + ": runaway_factor must be > 1");
  }
  if (!(body_radius > 0.0)) throw ConfigError(name + ": body_radius <= 0");
  if (velocity_reference.v_min > velocity_reference.v_max ||
      velocity_reference.omega_max < 0.0) {
    throw ConfigError(name + ": bad velocity_reference bounds");
  }
  for (int i = 0; i < 3; ++i) {
    if (damping.linear[i] < 0.0 || damping.quadratic[i] < 0.0) {
      throw ConfigError(name + ": damping must be >= 0");
    }
  }
  std::visit(
      overloaded{
          [&](const FloatingPlatformParams& p) {
            if (control_space != ControlSpace{ControlKind::kBinary, 8}) {
              throw ConfigError(name + ": thrusters need a binary dim-8 space");
            }
            for (const Vec2& d : p.thruster_directions) {
              if (std::abs(norm(d) - 1.0) > 1e-9) {
                throw ConfigError(name + ": thruster direction not unit");
              }
            }
            if (!(p.thrust_force > 0.0)) {
              throw ConfigError(name + ": thrust_force <= 0");
            }
          },
          [&](const KingfisherParams& p) {
            if (control_space != ControlSpace{ControlKind::kContinuous, 2}) {
              throw ConfigError(name + ": propellers need a continuous dim-2 "
                                       "space");
            }
            if (!(p.first_order_lag_tau > 0.0) || p.max_thrust_fwd < 0.0 ||
                p.max_thrust_rev < 0.0) {
              throw ConfigError(name + ": bad propeller parameters");
            }
          },
          [&](const Turtlebot2Params& p) {
            if (control_space != ControlSpace{ControlKind::kContinuous, 2}) {
              throw ConfigError(name + ": differential drive needs a "
                                       "continuous dim-2 space");
            }
            if (!(p.wheel_base > 0.0) || !(p.v_cmd_max > 0.0) ||
                !(p.omega_cmd_max > 0.0) || !(p.velocity_tracking_gain > 0.0)) {
              throw ConfigError(name + ": bad differential-drive parameters");
            }
          }},
      actuation);
  randomization.validate(control_space.dim, -1);
}

ActionVec command_from_normalized(const RobotSpec& spec,
                                  const ActionVec& u) {
  ActionVec cmd(u.dim());
  std::visit(overloaded{
                 [&](const FloatingPlatformParams&) {
                   for (int i = 0; i < u.dim(); ++i) {
                     cmd[i] = u[i] > 0.5 ? 1.0 : 0.0;
                   }
                 },
                 [&](const KingfisherParams& p) {
                   for (int i = 0; i < 2; ++i) {
                     cmd[i] = u[i] >= 0.0 ? u[i] * p.max_thrust_fwd
                                          : u[i] * p.max_thrust_rev;
                   }
                 },
                 [&](const Turtlebot2Params& p) {
                   double v = u[0] * p.v_cmd_max;
                   double w = u[1] * p.omega_cmd_max;
                   // Per-wheel speed saturation, keeping the curvature.
                   const double half = 0.5 * p.wheel_base;
                   const double peak =
                       std::max(std::abs(v - w * half), std::abs(v + w * half));
                   if (peak > p.v_cmd_max) {
                     const double s = p.v_cmd_max / peak;
                     v *= s;
                     w *= s;
                   }
                   cmd[0] = v;
                   cmd[1] = w;
                 }},
             spec.actuation);
  return cmd;
}

ProcessedAction process_actions(const RobotSpec& spec,
                                std::span<const double> raw) {
  if (static_cast<int>(raw.size()) != spec.control_space.dim) {
    throw ContractError("process_actions: " + spec.name + " expects " +
                        std::to_string(spec.control_space.dim) +
                        " action components, got " +
                        std::to_string(raw.size()));
  }
  ProcessedAction out;
  out.normalized = ActionVec(spec.control_space.dim);
  for (int i = 0; i < spec.control_space.dim; ++i) {
    out.normalized[i] = spec.control_space.kind == ControlKind::kBinary
                            ? (raw[i] > 0.5 ? 1.0 : 0.0)
                            : clip_unit(raw[i]);
  }
  out.command = command_from_normalized(spec, out.normalized);
  return out;
}

Wrench2 apply_actions(const RobotSpec& spec, const ActionVec& cmd,
                      const PlanarState& state, ActuatorState& actuator,
                      double dt) {
  Wrench2 w;
  std::visit(
      overloaded{
          [&](const FloatingPlatformParams& p) {
            for (int i = 0; i < 8; ++i) {
              if (cmd[i] <= 0.0) continue;
              const Vec2 f = p.thrust_force * cmd[i] * p.thruster_directions[i];
              w.fx += f.x;
              w.fy += f.y;
              w.tau += cross(p.thruster_positions[i], f);
            }
          },
          [&](const KingfisherParams& p) {
            const double alpha = 1.0 - std::exp(-dt / p.first_order_lag_tau);
            for (int i = 0; i < 2; ++i) {
              actuator.thrust[i] += alpha * (cmd[i] - actuator.thrust[i]);
              const Vec2 f{actuator.thrust[i], 0.0};
              w.fx += f.x;
              w.tau += cross(p.propeller_positions[i], f);
            }
          },
          [&](const Turtlebot2Params& p) {
            const double k = p.velocity_tracking_gain;
            w.fx = spec.mass_props.mass * k * (cmd[0] - state.twist.vx);
            w.tau = spec.mass_props.inertia_zz * k * (cmd[1] - state.twist.omega);
          }},
      spec.actuation);
  return w;
}

Twist2 constrain_twist(const RobotSpec& spec, const Twist2& twist) {
  Twist2 out = twist;
  if (std::holds_alternative<Turtlebot2Params>(spec.actuation)) out.vy = 0.0;
  return out;
}

double robot_shaping_reward(const RobotSpec& spec, const ActionVec& current,
                            const ActionVec& previous) {
  if (current.dim() != previous.dim()) {
    throw ContractError("robot_shaping_reward: dimension mismatch");
  }
  double change = 0.0;
  for (int i = 0; i < current.dim(); ++i) {
    if (spec.control_space.kind == ControlKind::kBinary) {
      change += current[i] != previous[i] ? 1.0 : 0.0;
    } else {
      const double d = current[i] - previous[i];
      change += d * d;
    }
  }
  return spec.shaping.weight * change;
}

RobotDones robot_get_dones(const RobotSpec& spec, const PlanarState& state) {
  RobotDones d;
  const double f = spec.runaway_factor;
  const Twist2& t = state.twist;
  d.early = !is_finite(state) ||
            std::abs(t.omega) > f * spec.vel_limits.omega_max ||
            std::hypot(t.vx, t.vy) > f * spec.vel_limits.v_max;
  return d;
}

WrenchBound wrench_bound(const RobotSpec& spec) {
  WrenchBound b;
  std::visit(
      overloaded{
          [&](const FloatingPlatformParams& p) {
            for (int i = 0; i < 8; ++i) {
              b.force += p.thrust_force;
              b.torque += p.thrust_force * std::abs(cross(
                                               p.thruster_positions[i],
                                               p.thruster_directions[i]));
            }
          },
          [&](const KingfisherParams& p) {
            const double t = std::max(p.max_thrust_fwd, p.max_thrust_rev);
            b.force = 2.0 * t;
            for (const Vec2& pos : p.propeller_positions) {
              b.torque += std::abs(pos.y) * t;
            }
          },
          [&](const Turtlebot2Params& p) {
            const double k = p.velocity_tracking_gain;
            b.force = spec.mass_props.mass * k *
                      (p.v_cmd_max + spec.vel_limits.v_max);
            b.torque = spec.mass_props.inertia_zz * k *
                       (p.omega_cmd_max + spec.vel_limits.omega_max);
          }},
      spec.actuation);
  return b;
}

}  // namespace navforge
