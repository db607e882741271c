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

#ifndef NAVFORGE_ROBOTS_H_
#define NAVFORGE_ROBOTS_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "navforge/action.h"
#include "navforge/planar.h"
#include "navforge/randomization.h"

namespace navforge {

enum class ControlKind { kBinary, kContinuous };

struct ControlSpace {
  ControlKind kind = ControlKind::kContinuous;
  int dim = 2;

  friend bool operator==(const ControlSpace&, const ControlSpace&) = default;
};

// Air-bearing platform with on/off thrusters.
struct FloatingPlatformParams {
  std::array<Vec2, 8> thruster_positions;   // body frame, m
  std::array<Vec2, 8> thruster_directions;  // unit vectors
  double thrust_force = 1.0;                // N per firing thruster
};

// Catamaran surface vessel with two fixed propellers along body +x.
// Index 0 is the left (+y) propeller, index 1 the right one.
struct KingfisherParams {
  std::array<Vec2, 2> propeller_positions;
  double max_thrust_fwd = 40.0;         // N
  double max_thrust_rev = 20.0;         // N
  double first_order_lag_tau = 0.2;     // s
};

// Differential-drive base driven by (v, omega) velocity commands.
struct Turtlebot2Params {
  double wheel_base = 0.23;             // m
  double v_cmd_max = 0.5;               // m/s, also the per-wheel speed limit
  double omega_cmd_max = 1.5;           // rad/s
  double velocity_tracking_gain = 10.0; // 1/s
};

using ActuationParams =
    std::variant<FloatingPlatformParams, KingfisherParams, Turtlebot2Params>;

struct VelocityLimits {
  double v_max = 1.0;
  double omega_max = 1.0;
};

struct RobotShapingParams {
  double weight = 0.0;  // <= 0
};

struct RobotSpec {
  std::string name;
  ControlSpace control_space;
  MassProps mass_props;
  DampingSpec damping;
  ActuationParams actuation;
  VelocityLimits vel_limits;
  RobotShapingParams shaping;
  // Twist beyond runaway_factor * vel_limits ends the episode.
  double runaway_factor = 5.0;
  double body_radius = 0.25;  // collision radius for obstacle tasks, m
  VelocityReferenceBounds velocity_reference;
  RandomizationConfig randomization;

  // Throws ConfigError on violated invariants.
  void validate() const;
};

// Per-environment mutable actuator state.
struct ActuatorState {
  std::array<double, 2> thrust{0.0, 0.0};  // lagged propeller thrust, N

  friend bool operator==(const ActuatorState&, const ActuatorState&) = default;
};

struct ProcessedAction {
  // Policy-facing action after thresholding/clipping: {0,1} per thruster or
  // [-1, 1] per channel. Shaping and smoothness metrics use this.
  ActionVec normalized;
  // Physical command: 0/1 firing, propeller thrust in N, or (v, omega).
  ActionVec command;
};

// Built-in robots: "floating_platform", "kingfisher", "turtlebot2".
std::vector<std::string> robot_names();
// Throws RegistryError listing the available robots.
RobotSpec default_robot_spec(std::string_view name);

FloatingPlatformParams default_thruster_layout(double radius, double force);

// Thresholds binary actions at 0.5, clips continuous ones to [-1, 1] and maps
// them to commands. Throws ContractError on dimension mismatch.
ProcessedAction process_actions(const RobotSpec& spec,
                                std::span<const double> raw_action);

// Physical command for an already normalized action.
ActionVec command_from_normalized(const RobotSpec& spec,
                                  const ActionVec& normalized);

// Body-frame actuation wrench for one physics substep. Advances the
// Kingfisher thrust lag held in `actuator`.
Wrench2 apply_actions(const RobotSpec& spec, const ActionVec& command,
                      const PlanarState& state, ActuatorState& actuator,
                      double dt);

// Robot-specific constraint on the twist after integration (the
// differential drive has no lateral velocity).
Twist2 constrain_twist(const RobotSpec& spec, const Twist2& twist);

// weight * (Hamming distance for binary actions, squared L2 otherwise).
double robot_shaping_reward(const RobotSpec& spec, const ActionVec& current,
                            const ActionVec& previous);

struct RobotDones {
  bool early = false;
  bool clean = false;
};

RobotDones robot_get_dones(const RobotSpec& spec, const PlanarState& state);

// Upper bound on |(fx, fy)| and |tau| produced by apply_actions for any
// action with the twist inside vel_limits.
struct WrenchBound {
  double force = 0.0;
  double torque = 0.0;
};
WrenchBound wrench_bound(const RobotSpec& spec);

}  // namespace navforge

#endif  // NAVFORGE_ROBOTS_H_
