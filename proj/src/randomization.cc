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

#include "navforge/randomization.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>

#include "navforge/errors.h"

namespace navforge {
namespace {

template <typename E>
bool has(const std::vector<E>& modes, E m) {
  return std::find(modes.begin(), modes.end(), m) != modes.end();
}

template <typename E, typename F>
E parse_mode(const std::string& s, std::initializer_list<E> all, F name,
             const char* category) {
  for (E e : all) {
    if (name(e) == s) return e;
  }
  throw ConfigError(std::string("unknown ") + category +
                    " randomization mode '" + s + "'");
}

void check_range(const Range& r, const std::string& what) {
  if (!r.well_ordered()) {
    throw ConfigError(what + ": range lo > hi");
  }
}

void check_nonneg(double v, const std::string& what) {
  if (!(v >= 0.0)) throw ConfigError(what + " must be >= 0");
}

void check_slices(const std::vector<Slice>& slices, int dim,
                  const std::string& what) {
  for (const Slice& s : slices) {
    if (s.begin < 0 || s.end < s.begin) {
      throw ConfigError(what + ": malformed slice");
    }
    if (dim >= 0 && s.end > dim) {
      throw ConfigError(what + ": slice [" + std::to_string(s.begin) + ", " +
                        std::to_string(s.end) + ") exceeds dimension " +
                        std::to_string(dim));
    }
  }
}

void check_noise_modes(const std::vector<NoiseMode>& modes,
                       const std::string& what) {
  if (has(modes, NoiseMode::kUniform) && has(modes, NoiseMode::kNormal)) {
    throw ConfigError(what + ": uniform and normal noise are exclusive");
  }
}

double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Bounded normal draw: truncated at 3 sigma, then clipped to +-max_delta.
double bounded_normal(CounterRng& rng, double stddev, double max_delta) {
  if (stddev <= 0.0) return 0.0;
  const double v = rng.truncated_normal(0.0, stddev);
  return max_delta > 0.0 ? clip(v, -max_delta, max_delta) : v;
}

double noise_draw(CounterRng& rng, bool normal, double scale,
                  double max_delta) {
  if (scale <= 0.0) return 0.0;
  return normal ? bounded_normal(rng, scale, max_delta)
                : rng.uniform(-scale, scale);
}

Wrench2 planar_wrench(double force, double direction, double torque) {
  return {force * std::cos(direction), force * std::sin(direction), torque};
}

double random_sign(CounterRng& rng) { return rng.uniform() < 0.5 ? -1.0 : 1.0; }

void warn_spring_once() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true)) {
    std::cerr << "[navforge] warning: CoM mode 'spring' is a placeholder and "
                 "has no effect\n";
  }
}

}  // namespace

std::string to_string(MassMode m) {
  switch (m) {
    case MassMode::kUniform: return "uniform";
    case MassMode::kNormal: return "normal";
    case MassMode::kConstantTimeDecay: return "constant_time_decay";
    case MassMode::kActionBasedDecay: return "action_based_decay";
  }
  return "?";
}

std::string to_string(ComMode m) {
  switch (m) {
    case ComMode::kUniform: return "uniform";
    case ComMode::kNormal: return "normal";
    case ComMode::kSpring: return "spring";
  }
  return "?";
}

std::string to_string(InertiaMode m) {
  switch (m) {
    case InertiaMode::kUniform: return "uniform";
    case InertiaMode::kNormal: return "normal";
    case InertiaMode::kDecay: return "decay";
  }
  return "?";
}

std::string to_string(NoiseMode m) {
  return m == NoiseMode::kUniform ? "uniform" : "normal";
}

std::string to_string(WrenchMode m) {
  switch (m) {
    case WrenchMode::kKickUniform: return "kick_uniform";
    case WrenchMode::kKickNormal: return "kick_normal";
    case WrenchMode::kConstantUniform: return "constant_uniform";
    case WrenchMode::kConstantNormal: return "constant_normal";
    case WrenchMode::kConstantSinusoidal: return "constant_sinusoidal";
  }
  return "?";
}

MassMode parse_mass_mode(const std::string& s) {
  return parse_mode(s,
                    {MassMode::kUniform, MassMode::kNormal,
                     MassMode::kConstantTimeDecay, MassMode::kActionBasedDecay},
                    [](MassMode m) { return to_string(m); }, "mass");
}

ComMode parse_com_mode(const std::string& s) {
  return parse_mode(s, {ComMode::kUniform, ComMode::kNormal, ComMode::kSpring},
                    [](ComMode m) { return to_string(m); }, "com");
}

InertiaMode parse_inertia_mode(const std::string& s) {
  return parse_mode(
      s, {InertiaMode::kUniform, InertiaMode::kNormal, InertiaMode::kDecay},
      [](InertiaMode m) { return to_string(m); }, "inertia");
}

NoiseMode parse_noise_mode(const std::string& s) {
  return parse_mode(s, {NoiseMode::kUniform, NoiseMode::kNormal},
                    [](NoiseMode m) { return to_string(m); }, "noise");
}

WrenchMode parse_wrench_mode(const std::string& s) {
  return parse_mode(
      s,
      {WrenchMode::kKickUniform, WrenchMode::kKickNormal,
       WrenchMode::kConstantUniform, WrenchMode::kConstantNormal,
       WrenchMode::kConstantSinusoidal},
      [](WrenchMode m) { return to_string(m); }, "wrench");
}

void RandomizationConfig::validate(int action_dim, int obs_dim) const {
  check_nonneg(mass.max_delta, "mass.max_delta");
  check_nonneg(mass.std, "mass.std");
  if (!(mass.min_mass > 0.0)) throw ConfigError("mass.min_mass must be > 0");
  check_nonneg(com.max_delta, "com.max_delta");
  check_nonneg(com.std, "com.std");
  check_nonneg(inertia.max_delta, "inertia.max_delta");
  check_nonneg(inertia.std, "inertia.std");
  if (!(inertia.min_inertia > 0.0)) {
    throw ConfigError("inertia.min_inertia must be > 0");
  }

  auto check_noise = [](const std::vector<Slice>& slices,
                        const std::vector<double>& max_delta,
                        const std::vector<double>& stddev,
                        const std::vector<NoiseMode>& modes, int dim,
                        const std::string& what) {
    check_slices(slices, dim, what);
    check_noise_modes(modes, what);
    if (has(modes, NoiseMode::kUniform) && max_delta.size() != slices.size()) {
      throw ConfigError(what + ": need one max_delta per slice");
    }
    if (has(modes, NoiseMode::kNormal) && stddev.size() != slices.size()) {
      throw ConfigError(what + ": need one std per slice");
    }
    for (double v : max_delta) check_nonneg(v, what + ".max_delta");
    for (double v : stddev) check_nonneg(v, what + ".std");
  };
  if (noisy_actions.enable) {
    check_noise(noisy_actions.slices, noisy_actions.max_delta,
                noisy_actions.std, noisy_actions.randomization_modes,
                action_dim, "noisy_actions");
  }
  for (const Range& r : noisy_actions.clip_actions) {
    check_range(r, "noisy_actions.clip_actions");
  }
  if (noisy_actions.enable && !noisy_actions.clip_actions.empty() &&
      noisy_actions.clip_actions.size() != noisy_actions.slices.size()) {
    throw ConfigError("noisy_actions: need one clip range per slice");
  }

  if (actions_rescaler.enable) {
    check_slices(actions_rescaler.slices, action_dim, "actions_rescaler");
    if (has(actions_rescaler.randomization_modes, NoiseMode::kNormal)) {
      throw ConfigError("actions_rescaler supports the uniform mode only");
    }
    if (actions_rescaler.rescaling_ranges.size() !=
        actions_rescaler.slices.size()) {
      throw ConfigError("actions_rescaler: need one range per slice");
    }
    if (!actions_rescaler.clip_actions.empty() &&
        actions_rescaler.clip_actions.size() !=
            actions_rescaler.slices.size()) {
      throw ConfigError("actions_rescaler: need one clip range per slice");
    }
  }
  for (const Range& r : actions_rescaler.rescaling_ranges) {
    check_range(r, "actions_rescaler.rescaling_ranges");
  }
  for (const Range& r : actions_rescaler.clip_actions) {
    check_range(r, "actions_rescaler.clip_actions");
  }

  if (noisy_observations.enable) {
    check_noise(noisy_observations.slices, noisy_observations.max_delta,
                noisy_observations.std,
                noisy_observations.randomization_modes, obs_dim,
                "noisy_observations");
  }

  check_range(wrench.uniform_force, "wrench.uniform_force");
  check_range(wrench.uniform_torque, "wrench.uniform_torque");
  check_range(wrench.sinusoid_frequency, "wrench.sinusoid_frequency");
  if (wrench.uniform_force.lo < 0.0 || wrench.uniform_torque.lo < 0.0) {
    throw ConfigError("wrench magnitude ranges must be non-negative");
  }
  check_nonneg(wrench.normal_force.hi, "wrench.normal_force std");
  check_nonneg(wrench.normal_torque.hi, "wrench.normal_torque std");
  if (wrench.push_interval < 1) {
    throw ConfigError("wrench.push_interval must be >= 1");
  }
}

bool RandomizationConfig::any_enabled() const {
  return mass.enable || com.enable || inertia.enable || noisy_actions.enable ||
         actions_rescaler.enable || noisy_observations.enable || wrench.enable;
}

RandomizationConfig no_randomization() { return RandomizationConfig{}; }

ResetSample on_reset(const RandomizationConfig& cfg, uint64_t global_seed,
                     uint64_t env, uint64_t episode, const MassProps& base,
                     int action_dim, int obs_dim) {
  RandomizationPlan plan;
  plan.global_seed = global_seed;
  plan.env = env;
  plan.episode = episode;
  plan.action_rescale.fill(1.0);
  plan.step_rng = CounterRng::for_stream(global_seed, env, episode,
                                         StreamId::kRandomizationStep);
  plan.action_rng = CounterRng::for_stream(global_seed, env, episode,
                                           StreamId::kRandomizationAction);
  plan.obs_rng = CounterRng::for_stream(global_seed, env, episode,
                                        StreamId::kRandomizationObservation);
  CounterRng rng = CounterRng::for_stream(global_seed, env, episode,
                                          StreamId::kRandomizationReset);

  MassProps props = base;

  if (cfg.mass.enable) {
    const auto& m = cfg.mass;
    double delta = 0.0;
    if (has(m.randomization_modes, MassMode::kUniform)) {
      delta += rng.uniform(-m.max_delta, m.max_delta);
    }
    if (has(m.randomization_modes, MassMode::kNormal)) {
      delta += bounded_normal(rng, m.std, m.max_delta);
    }
    delta = clip(delta, -m.max_delta, m.max_delta);
    plan.mass_delta = delta;
    double mass = base.mass + delta;
    if (mass < m.min_mass) {
      mass = m.min_mass;
      plan.mass_floored = true;
    }
    // Inertia follows the mass at fixed geometry.
    props.inertia_zz = base.inertia_zz * (mass / base.mass);
    props.mass = mass;
  }

  if (cfg.com.enable) {
    const auto& c = cfg.com;
    Vec2 delta;
    if (has(c.randomization_modes, ComMode::kUniform)) {
      delta.x += rng.uniform(-c.max_delta, c.max_delta);
      delta.y += rng.uniform(-c.max_delta, c.max_delta);
    }
    if (has(c.randomization_modes, ComMode::kNormal)) {
      delta.x += bounded_normal(rng, c.std, c.max_delta);
      delta.y += bounded_normal(rng, c.std, c.max_delta);
    }
    if (has(c.randomization_modes, ComMode::kSpring)) warn_spring_once();
    delta.x = clip(delta.x, -c.max_delta, c.max_delta);
    delta.y = clip(delta.y, -c.max_delta, c.max_delta);
    plan.com_delta = delta;
    props.com_offset = base.com_offset + delta;
  }

  if (cfg.inertia.enable) {
    const auto& in = cfg.inertia;
    double delta = 0.0;
    if (has(in.randomization_modes, InertiaMode::kUniform)) {
      delta += rng.uniform(-in.max_delta, in.max_delta);
    }
    if (has(in.randomization_modes, InertiaMode::kNormal)) {
      delta += bounded_normal(rng, in.std, in.max_delta);
    }
    delta = clip(delta, -in.max_delta, in.max_delta);
    plan.inertia_delta = delta;
    props.inertia_zz = std::max(in.min_inertia, props.inertia_zz + delta);
  }

  if (cfg.noisy_actions.enable) {
    const auto& na = cfg.noisy_actions;
    const bool normal = has(na.randomization_modes, NoiseMode::kNormal);
    for (size_t s = 0; s < na.slices.size(); ++s) {
      const double base_scale = normal ? na.std[s] : na.max_delta[s];
      const double max_delta = s < na.max_delta.size() ? na.max_delta[s] : 0.0;
      for (int k = na.slices[s].begin; k < na.slices[s].end; ++k) {
        const double kappa = na.sample_scale_on_reset ? rng.uniform() : 1.0;
        plan.action_noise_scale[k] = kappa * base_scale;
        if (!na.resample_per_step) {
          plan.action_noise_fixed[k] =
              noise_draw(rng, normal, plan.action_noise_scale[k], max_delta);
        }
      }
    }
  }

  if (cfg.actions_rescaler.enable) {
    const auto& ar = cfg.actions_rescaler;
    for (size_t s = 0; s < ar.slices.size(); ++s) {
      for (int k = ar.slices[s].begin; k < ar.slices[s].end; ++k) {
        plan.action_rescale[k] =
            rng.uniform(ar.rescaling_ranges[s].lo, ar.rescaling_ranges[s].hi);
      }
    }
  }
  (void)action_dim;

  if (cfg.noisy_observations.enable) {
    const auto& no = cfg.noisy_observations;
    const bool normal = has(no.randomization_modes, NoiseMode::kNormal);
    plan.obs_noise_scale.assign(obs_dim, 0.0);
    plan.obs_noise_fixed.assign(obs_dim, 0.0);
    for (size_t s = 0; s < no.slices.size(); ++s) {
      const double base_scale = normal ? no.std[s] : no.max_delta[s];
      const double max_delta = s < no.max_delta.size() ? no.max_delta[s] : 0.0;
      for (int k = no.slices[s].begin; k < no.slices[s].end && k < obs_dim;
           ++k) {
        const double kappa = no.sample_scale_on_reset ? rng.uniform() : 1.0;
        plan.obs_noise_scale[k] = kappa * base_scale;
        if (!no.resample_per_step) {
          plan.obs_noise_fixed[k] =
              noise_draw(rng, normal, plan.obs_noise_scale[k], max_delta);
        }
      }
    }
  }

  if (cfg.wrench.enable) {
    const auto& w = cfg.wrench;
    if (has(w.randomization_modes, WrenchMode::kConstantUniform)) {
      const double f = rng.uniform(w.uniform_force.lo, w.uniform_force.hi);
      const double dir = rng.uniform(-kPi, kPi);
      const double tau = rng.uniform(w.uniform_torque.lo, w.uniform_torque.hi) *
                         random_sign(rng);
      plan.constant_wrench += planar_wrench(f, dir, tau);
    }
    if (has(w.randomization_modes, WrenchMode::kConstantNormal)) {
      const double f =
          std::abs(rng.truncated_normal(w.normal_force.lo, w.normal_force.hi));
      const double dir = rng.uniform(-kPi, kPi);
      const double tau =
          rng.truncated_normal(w.normal_torque.lo, w.normal_torque.hi) *
          random_sign(rng);
      plan.constant_wrench += planar_wrench(f, dir, tau);
    }
    if (has(w.randomization_modes, WrenchMode::kConstantSinusoidal)) {
      plan.sin_force_amplitude =
          rng.uniform(w.uniform_force.lo, w.uniform_force.hi);
      plan.sin_torque_amplitude =
          rng.uniform(w.uniform_torque.lo, w.uniform_torque.hi);
      plan.sin_frequency =
          rng.uniform(w.sinusoid_frequency.lo, w.sinusoid_frequency.hi);
      plan.sin_phase = rng.uniform(0.0, 2.0 * kPi);
      plan.sin_direction = rng.uniform(-kPi, kPi);
    }
  }

  plan.reset_props = props;
  return {plan, props};
}

StepSample on_step(const RandomizationConfig& cfg, RandomizationPlan& plan,
                   int t, const MassProps& props, double control_dt,
                   double action_magnitude) {
  StepSample out{{}, props};

  if (cfg.wrench.enable) {
    const auto& w = cfg.wrench;
    const bool kick_phase = t % w.push_interval == 0;
    if (kick_phase && has(w.randomization_modes, WrenchMode::kKickUniform)) {
      const double f = plan.step_rng.uniform(w.uniform_force.lo,
                                             w.uniform_force.hi);
      const double dir = plan.step_rng.uniform(-kPi, kPi);
      const double tau = plan.step_rng.uniform(w.uniform_torque.lo,
                                               w.uniform_torque.hi) *
                         random_sign(plan.step_rng);
      out.disturbance += planar_wrench(f, dir, tau);
    }
    if (kick_phase && has(w.randomization_modes, WrenchMode::kKickNormal)) {
      const double f = std::abs(
          plan.step_rng.truncated_normal(w.normal_force.lo, w.normal_force.hi));
      const double dir = plan.step_rng.uniform(-kPi, kPi);
      const double tau = std::abs(plan.step_rng.truncated_normal(
                             w.normal_torque.lo, w.normal_torque.hi)) *
                         random_sign(plan.step_rng);
      out.disturbance += planar_wrench(f, dir, tau);
    }
    out.disturbance += plan.constant_wrench;
    if (has(w.randomization_modes, WrenchMode::kConstantSinusoidal)) {
      const double s = std::sin(2.0 * kPi * plan.sin_frequency * t * control_dt +
                                plan.sin_phase);
      out.disturbance += planar_wrench(plan.sin_force_amplitude * s,
                                       plan.sin_direction,
                                       plan.sin_torque_amplitude * s);
    }
  }

  if (cfg.mass.enable) {
    const auto& m = cfg.mass;
    const bool time_decay =
        has(m.randomization_modes, MassMode::kConstantTimeDecay);
    const bool action_decay =
        has(m.randomization_modes, MassMode::kActionBasedDecay);
    if (time_decay || action_decay) {
      double mass = plan.reset_props.mass;
      if (time_decay) mass += m.mass_change_rate * t * control_dt;
      if (action_decay) {
        plan.consumed_mass +=
            std::abs(m.mass_change_rate) * action_magnitude * control_dt;
        mass -= plan.consumed_mass;
      }
      if (mass < m.min_mass) {
        mass = m.min_mass;
        plan.mass_floored = true;
      }
      out.props.mass = mass;
    }
  }

  if (cfg.inertia.enable &&
      has(cfg.inertia.randomization_modes, InertiaMode::kDecay)) {
    const double rate = std::isnan(cfg.inertia.inertia_change_rate)
                            ? cfg.mass.mass_change_rate
                            : cfg.inertia.inertia_change_rate;
    out.props.inertia_zz =
        std::max(cfg.inertia.min_inertia,
                 plan.reset_props.inertia_zz + rate * t * control_dt);
  }
  return out;
}

ActionVec on_action(const RandomizationConfig& cfg, RandomizationPlan& plan,
                    const ActionVec& action) {
  ActionVec out = action;
  if (cfg.noisy_actions.enable) {
    const auto& na = cfg.noisy_actions;
    const bool normal = has(na.randomization_modes, NoiseMode::kNormal);
    for (size_t s = 0; s < na.slices.size(); ++s) {
      const double max_delta = s < na.max_delta.size() ? na.max_delta[s] : 0.0;
      for (int k = na.slices[s].begin; k < na.slices[s].end; ++k) {
        out[k] += na.resample_per_step
                      ? noise_draw(plan.action_rng, normal,
                                   plan.action_noise_scale[k], max_delta)
                      : plan.action_noise_fixed[k];
        if (!na.clip_actions.empty()) {
          out[k] = clip(out[k], na.clip_actions[s].lo, na.clip_actions[s].hi);
        }
      }
    }
  }
  if (cfg.actions_rescaler.enable) {
    const auto& ar = cfg.actions_rescaler;
    for (size_t s = 0; s < ar.slices.size(); ++s) {
      for (int k = ar.slices[s].begin; k < ar.slices[s].end; ++k) {
        out[k] *= plan.action_rescale[k];
        if (!ar.clip_actions.empty()) {
          out[k] = clip(out[k], ar.clip_actions[s].lo, ar.clip_actions[s].hi);
        }
      }
    }
  }
  return out;
}

void on_observation(const RandomizationConfig& cfg, RandomizationPlan& plan,
                    std::span<double> obs,
                    std::span<const std::pair<int, int>> angle_pairs) {
  if (!cfg.noisy_observations.enable) return;
  const auto& no = cfg.noisy_observations;
  const bool normal = has(no.randomization_modes, NoiseMode::kNormal);
  const int n = std::min<int>(obs.size(), plan.obs_noise_scale.size());
  // Pairs are renormalized only when noise actually moved them.
  constexpr size_t kMaxPairs = 16;
  std::array<std::pair<double, double>, kMaxPairs> before{};
  const size_t num_pairs = std::min(angle_pairs.size(), kMaxPairs);
  for (size_t p = 0; p < num_pairs; ++p) {
    before[p] = {obs[angle_pairs[p].first], obs[angle_pairs[p].second]};
  }
  for (size_t s = 0; s < no.slices.size(); ++s) {
    const double max_delta = s < no.max_delta.size() ? no.max_delta[s] : 0.0;
    for (int k = no.slices[s].begin; k < no.slices[s].end && k < n; ++k) {
      obs[k] += no.resample_per_step
                    ? noise_draw(plan.obs_rng, normal, plan.obs_noise_scale[k],
                                 max_delta)
                    : plan.obs_noise_fixed[k];
    }
  }
  if (no.normalize_angles) {
    for (size_t p = 0; p < num_pairs; ++p) {
      const auto [ci, si] = angle_pairs[p];
      if (obs[ci] == before[p].first && obs[si] == before[p].second) continue;
      const double r = std::hypot(obs[ci], obs[si]);
      if (r > 0.0) {
        obs[ci] /= r;
        obs[si] /= r;
      } else {
        obs[ci] = 1.0;
        obs[si] = 0.0;
      }
    }
  }
}

}  // namespace navforge
