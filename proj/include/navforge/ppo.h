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

#ifndef NAVFORGE_PPO_H_
#define NAVFORGE_PPO_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "navforge/env.h"
#include "navforge/metrics.h"
#include "navforge/nn.h"
#include "navforge/robots.h"
#include "navforge/scaler.h"

namespace navforge {

enum class HeadKind {
  kAuto,       // resolved from the robot's control space
  kGaussian,   // state-independent log std
  kBernoulli,  // one independent logit per binary actuator
};

std::string to_string(HeadKind h);
HeadKind parse_head_kind(const std::string& name);
HeadKind head_for(const ControlSpace& space);

struct PolicySpec {
  std::vector<int> hidden_layers{128, 128};
  Activation activation = Activation::kTanh;
  HeadKind head = HeadKind::kAuto;
  double init_log_std = 0.0;
  double min_log_std = -20.0;
  double max_log_std = 2.0;

  void validate() const;
  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct PPOConfig {
  int rollouts = 32;
  int epochs = 8;
  int minibatches = 8;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double lr = 5e-4;
  double kl_threshold = 0.008;
  double lr_min = 1e-6;
  double lr_max = 1e-2;
  double kl_factor = 2.0;   // adapt when KL leaves [threshold/f, threshold*f]
  double lr_factor = 1.5;
  double grad_norm_clip = 1.0;
  double ratio_clip = 0.2;
  double value_clip = 0.2;
  bool clip_predicted_values = true;
  double value_loss_coef = 2.0;
  double entropy_coef = 0.0;
  double kl_early_stop = 0.0;  // 0 disables
  bool time_limit_bootstrap = false;
  bool standardize_advantages = true;
  double scaler_clip = 5.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
  friend bool operator==(const PPOConfig&, const PPOConfig&) = default;
};

// Actor and critic MLPs over one flat parameter vector laid out as
// [actor | log_std (Gaussian only) | critic].
template <class Scalar>
class ActorCritic {
 public:
  ActorCritic() = default;
  // spec.head must be resolved (not kAuto).
  ActorCritic(const PolicySpec& spec, int obs_dim, int action_dim);

  const PolicySpec& spec() const { return spec_; }
  HeadKind head() const { return spec_.head; }
  int obs_dim() const { return obs_dim_; }
  int action_dim() const { return action_dim_; }
  const Mlp<Scalar>& actor() const { return actor_; }
  const Mlp<Scalar>& critic() const { return critic_; }

  int num_params() const { return critic_offset() + critic_.num_params(); }
  int log_std_offset() const { return actor_.num_params(); }
  int log_std_size() const {
    return spec_.head == HeadKind::kGaussian ? action_dim_ : 0;
  }
  int critic_offset() const { return log_std_offset() + log_std_size(); }

  std::vector<Scalar>& params() { return params_; }
  const std::vector<Scalar>& params() const { return params_; }

  // Default-style uniform init for both MLPs, log std = init_log_std.
  void init(CounterRng& rng);

  std::span<const Scalar> actor_params(std::span<const Scalar> p) const {
    return p.first(actor_.num_params());
  }
  std::span<const Scalar> critic_params(std::span<const Scalar> p) const {
    return p.subspan(critic_offset(), critic_.num_params());
  }
  // Clamped log std for Gaussian heads.
  Scalar log_std(std::span<const Scalar> p, int k) const;

 private:
  PolicySpec spec_;
  int obs_dim_ = 0;
  int action_dim_ = 0;
  Mlp<Scalar> actor_;
  Mlp<Scalar> critic_;
  std::vector<Scalar> params_;
};

// Log-probabilities of `actions` (action_dim x B) under head outputs
// `head_out` (means or logits).
template <class Scalar>
VectorX<Scalar> log_prob(const ActorCritic<Scalar>& ac,
                         std::span<const Scalar> params,
                         const MatrixX<Scalar>& head_out,
                         const MatrixX<Scalar>& actions);

template <class Scalar>
struct Minibatch {
  MatrixX<Scalar> obs;        // obs_dim x B, already standardized
  MatrixX<Scalar> actions;    // action_dim x B
  VectorX<Scalar> old_log_prob;
  VectorX<Scalar> advantages;
  VectorX<Scalar> returns;    // value-scaled targets
  VectorX<Scalar> old_values; // value-scaled predictions at collection
};

struct LossTerms {
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double total = 0.0;
  double kl = 0.0;  // mean((r - 1) - log r)
  double clip_fraction = 0.0;
};

// Clipped-surrogate PPO loss. When `grad` is non-empty the analytic
// gradient with respect to `params` is accumulated into it.
template <class Scalar>
LossTerms ppo_loss(const ActorCritic<Scalar>& ac,
                   std::span<const Scalar> params, const Minibatch<Scalar>& mb,
                   const PPOConfig& cfg, std::span<Scalar> grad = {});

// Generalized advantage estimation over a [step][env] layout. `values`
// holds V(s_t); `last_values` bootstraps the step after the buffer. A done
// flag cuts the bootstrap.
void compute_gae(std::span<const double> rewards,
                 std::span<const uint8_t> dones, std::span<const double> values,
                 std::span<const double> last_values, int num_envs,
                 double gamma, double lambda, std::span<double> advantages,
                 std::span<double> returns);

// (x - mean) / (unbiased std + 1e-8) in place.
void standardize(std::span<double> x);

// Adam with PyTorch defaults and bias correction.
class Adam {
 public:
  Adam() = default;
  Adam(int n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(std::span<float> params, std::span<const float> grad, double lr);
  int steps() const { return t_; }

 private:
  std::vector<float> m_, v_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  int t_ = 0;
};

// Scales grad so its global L2 norm is at most max_norm; returns the norm
// before clipping.
double clip_grad_norm(std::span<float> grad, double max_norm);

class KLAdaptiveLR {
 public:
  explicit KLAdaptiveLR(const PPOConfig& cfg);
  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  double step(double kl);

 private:
  double lr_;
  double threshold_, lr_min_, lr_max_, kl_factor_, lr_factor_;
};

// Policy plus the standardizers it was trained with.
struct Agent {
  ActorCritic<float> model;
  RunningScaler obs_scaler;
  RunningScaler value_scaler;

  static Agent create(PolicySpec spec, const RobotSpec& robot, int obs_dim,
                      uint64_t seed, double scaler_clip = 5.0);
};

// Throws ContractError when the agent does not fit the batch.
void check_agent_matches(const Agent& agent, const EnvBatch& env);

struct ActOutput {
  std::vector<double> actions;   // B x action_dim
  std::vector<double> log_prob;  // B
  std::vector<double> values;    // B, unscaled
};

// obs_std holds B standardized observations. Stochastic actions draw from
// one stream per row; pass an empty span for deterministic actions (mean,
// or bits with positive logit).
ActOutput act(const Agent& agent, std::span<const double> obs_std, int rows,
              std::span<CounterRng> rngs);

struct RolloutBuffer {
  int steps = 0;
  int num_envs = 0;
  int obs_dim = 0;
  int action_dim = 0;
  std::vector<float> obs;       // standardized
  std::vector<float> actions;
  std::vector<double> log_prob;
  std::vector<double> values;   // unscaled
  std::vector<double> rewards;
  std::vector<uint8_t> dones;
  std::vector<uint8_t> truncated;  // timeout without early termination
  std::vector<double> last_values;
  std::vector<double> advantages;
  std::vector<double> returns;

  size_t size() const { return size_t(steps) * num_envs; }
};

// Runs `steps` control steps, updating the observation standardizer with
// each batch before the policy sees it.
void collect_rollout(EnvBatch& env, Agent& agent, int steps, uint64_t seed,
                     uint64_t rollout_index, RolloutBuffer& buffer,
                     const std::function<void(const StepResult&)>& on_step = {});

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double kl = 0.0;  // mean over the last epoch's minibatches
  double lr = 0.0;
  double grad_norm = 0.0;
  int epochs_run = 0;
};

// GAE, value standardization and the PPO epochs over one buffer.
UpdateStats ppo_update(Agent& agent, RolloutBuffer& buffer,
                       const PPOConfig& cfg, Adam& adam, KLAdaptiveLR& sched,
                       uint64_t seed, uint64_t update_index);

struct TrainConfig {
  // Training runs on the evaluation batch size unless configured otherwise.
  EnvConfig env = [] {
    EnvConfig e;
    e.num_envs = 4096;
    return e;
  }();
  PPOConfig ppo;
  PolicySpec policy;
  int epochs = 3200;
  // Start each env at a random point of its first episode so that episode
  // boundaries do not line up across the batch.
  bool desync_episodes = true;
  MetricsConfig metrics;
};

struct EpochLog {
  int epoch = 0;
  double mean_reward = 0.0;  // NaN when no episode finished
  double std_reward = 0.0;
  double kl = 0.0;
  double lr = 0.0;
  double wall_clock = 0.0;   // s since training start
  double policy_loss = 0.0;
  double value_loss = 0.0;
  int episodes = 0;
  double success_rate = 0.0;
  double mean_goals_reached = 0.0;
};

class PpoTrainer {
 public:
  explicit PpoTrainer(TrainConfig cfg);
  ~PpoTrainer();

  EpochLog run_epoch();
  std::vector<EpochLog> train(
      const std::function<void(const EpochLog&)>& on_epoch = {});

  int epoch() const { return epoch_; }
  const TrainConfig& config() const { return cfg_; }
  const Agent& agent() const { return agent_; }
  EnvBatch& env() { return *env_; }
  double lr() const { return sched_.lr(); }

 private:
  TrainConfig cfg_;
  std::unique_ptr<EnvBatch> env_;
  std::unique_ptr<MetricsRecorder> recorder_;
  Agent agent_;
  Adam adam_;
  KLAdaptiveLR sched_;
  RolloutBuffer buffer_;
  std::vector<double> episode_return_;
  int epoch_ = 0;
  double start_time_ = 0.0;
};

// Deterministic evaluation: the first ceil(episodes / num_envs) episodes of
// every env, ordered by (episode, env) and truncated to `episodes`.
// `on_step` sees every step result, e.g. to record trajectories.
std::vector<EpisodeMetrics> evaluate_policy(
    EnvBatch& env, const Agent& agent, int episodes,
    const MetricsConfig& cfg = {},
    const std::function<void(const StepResult&)>& on_step = {});

}  // namespace navforge

#endif  // NAVFORGE_PPO_H_
