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

#ifndef NAVFORGE_RANDOMIZATION_H_
#define NAVFORGE_RANDOMIZATION_H_

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "navforge/action.h"
#include "navforge/planar.h"
#include "navforge/rng.h"

namespace navforge {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool well_ordered() const { return lo <= hi; }
  friend bool operator==(const Range&, const Range&) = default;
};

// Half-open index interval [begin, end) into an action or observation vector.
struct Slice {
  int begin = 0;
  int end = 0;

  friend bool operator==(const Slice&, const Slice&) = default;
};

enum class MassMode { kUniform, kNormal, kConstantTimeDecay, kActionBasedDecay };
enum class ComMode { kUniform, kNormal, kSpring };
enum class InertiaMode { kUniform, kNormal, kDecay };
enum class NoiseMode { kUniform, kNormal };
enum class WrenchMode {
  kKickUniform,
  kKickNormal,
  kConstantUniform,
  kConstantNormal,
  kConstantSinusoidal,
};

// Mode names as they appear in configuration files.
std::string to_string(MassMode m);
std::string to_string(ComMode m);
std::string to_string(InertiaMode m);
std::string to_string(NoiseMode m);
std::string to_string(WrenchMode m);
// Parsers throw ConfigError on names outside the catalog.
MassMode parse_mass_mode(const std::string& s);
ComMode parse_com_mode(const std::string& s);
InertiaMode parse_inertia_mode(const std::string& s);
NoiseMode parse_noise_mode(const std::string& s);
WrenchMode parse_wrench_mode(const std::string& s);

struct MassRandomizationConfig {
  bool enable = false;
  std::vector<MassMode> randomization_modes;
  double max_delta = 0.0;         // kg
  double std = 0.0;               // kg, normal mode
  double mass_change_rate = 0.0;  // kg/s (time decay) or kg/s per unit action
  double min_mass = 0.1;          // floor, kg
};

struct ComRandomizationConfig {
  bool enable = false;
  std::vector<ComMode> randomization_modes;
  double max_delta = 0.0;  // m, per axis
  double std = 0.0;
};

struct InertiaRandomizationConfig {
  bool enable = false;
  std::vector<InertiaMode> randomization_modes;
  double max_delta = 0.0;  // kg m^2
  double std = 0.0;
  // Decay rate in kg m^2/s; NaN means "reuse mass_change_rate".
  double inertia_change_rate = std::numeric_limits<double>::quiet_NaN();
  double min_inertia = 1e-3;
};

struct NoisyActionsConfig {
  bool enable = false;
  std::vector<NoiseMode> randomization_modes;
  std::vector<Slice> slices;
  std::vector<double> max_delta;  // one per slice
  std::vector<double> std;        // one per slice (normal mode)
  std::vector<Range> clip_actions;
  bool sample_scale_on_reset = true;
  bool resample_per_step = true;
};

struct ActionsRescalerConfig {
  bool enable = false;
  std::vector<NoiseMode> randomization_modes;  // uniform only
  std::vector<Slice> slices;
  std::vector<Range> rescaling_ranges;
  std::vector<Range> clip_actions;
};

struct NoisyObservationsConfig {
  bool enable = false;
  std::vector<NoiseMode> randomization_modes;
  std::vector<Slice> slices;
  std::vector<double> max_delta;
  std::vector<double> std;
  bool normalize_angles = true;
  bool sample_scale_on_reset = true;
  bool resample_per_step = true;
};

struct WrenchRandomizationConfig {
  bool enable = false;
  std::vector<WrenchMode> randomization_modes;
  Range uniform_force{0.0, 0.0};    // N, magnitude
  Range uniform_torque{0.0, 0.0};   // N m, magnitude
  Range normal_force{0.0, 0.0};     // (mean, std) of magnitude
  Range normal_torque{0.0, 0.0};    // (mean, std) of magnitude
  int push_interval = 1;            // control steps between kicks
  Range sinusoid_frequency{0.1, 0.5};  // Hz
};

struct RandomizationConfig {
  MassRandomizationConfig mass;
  ComRandomizationConfig com;
  InertiaRandomizationConfig inertia;
  NoisyActionsConfig noisy_actions;
  ActionsRescalerConfig actions_rescaler;
  NoisyObservationsConfig noisy_observations;
  WrenchRandomizationConfig wrench;

  // Range ordering, interval, and per-slice array lengths. Slices are checked
  // against the action/observation dimensions when those are known (>= 0).
  void validate(int action_dim = -1, int obs_dim = -1) const;
  bool any_enabled() const;
};

// All randomization disabled.
RandomizationConfig no_randomization();

// Per-environment, per-episode sampled perturbations and stream positions.
struct RandomizationPlan {
  uint64_t global_seed = 0;
  uint64_t env = 0;
  uint64_t episode = 0;

  double mass_delta = 0.0;
  Vec2 com_delta;
  double inertia_delta = 0.0;
  bool mass_floored = false;

  // Reset-time mass properties (after perturbation); decays start here.
  MassProps reset_props;
  double consumed_mass = 0.0;  // action-based decay accumulator

  std::array<double, kMaxActionDim> action_noise_scale{};
  std::array<double, kMaxActionDim> action_noise_fixed{};
  std::array<double, kMaxActionDim> action_rescale{};
  std::vector<double> obs_noise_scale;
  std::vector<double> obs_noise_fixed;

  Wrench2 constant_wrench;
  double sin_force_amplitude = 0.0;
  double sin_torque_amplitude = 0.0;
  double sin_frequency = 0.0;
  double sin_phase = 0.0;
  double sin_direction = 0.0;

  CounterRng step_rng;
  CounterRng action_rng;
  CounterRng obs_rng;

  friend bool operator==(const RandomizationPlan&,
                         const RandomizationPlan&) = default;
};

struct ResetSample {
  RandomizationPlan plan;
  MassProps props;
};

// Samples all reset-timed perturbations. obs_dim sizes the observation
// noise buffers (0 when observation noise is unused).
ResetSample on_reset(const RandomizationConfig& config, uint64_t global_seed,
                     uint64_t env, uint64_t episode, const MassProps& base,
                     int action_dim, int obs_dim);

struct StepSample {
  Wrench2 disturbance;
  MassProps props;
};

// t is the control-step index within the episode; action_magnitude feeds the
// action-based mass decay.
StepSample on_step(const RandomizationConfig& config, RandomizationPlan& plan,
                   int t, const MassProps& props, double control_dt,
                   double action_magnitude);

// Noise, then rescaling, then clipping on the configured slices.
ActionVec on_action(const RandomizationConfig& config, RandomizationPlan& plan,
                    const ActionVec& action);

// Additive noise on the configured slices; optional renormalization of the
// given (cos, sin) index pairs.
void on_observation(const RandomizationConfig& config, RandomizationPlan& plan,
                    std::span<double> obs,
                    std::span<const std::pair<int, int>> angle_pairs);

}  // namespace navforge

#endif  // NAVFORGE_RANDOMIZATION_H_
