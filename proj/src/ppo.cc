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

#include "navforge/ppo.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "navforge/errors.h"

namespace navforge {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

template <class Scalar>
Scalar softplus(Scalar x) {
  return x > Scalar(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

template <class Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

double now_seconds() { return omp_get_wtime(); }

}  // namespace

std::string to_string(HeadKind h) {
  switch (h) {
    case HeadKind::kAuto: return "auto";
    case HeadKind::kGaussian: return "gaussian";
    case HeadKind::kBernoulli: return "bernoulli";
  }
  return "?";
}

HeadKind parse_head_kind(const std::string& name) {
  if (name == "auto") return HeadKind::kAuto;
  if (name == "gaussian") return HeadKind::kGaussian;
  if (name == "bernoulli") return HeadKind::kBernoulli;
  throw ConfigError("unknown policy head '" + name +
                    "'; available: auto gaussian bernoulli");
}

HeadKind head_for(const ControlSpace& space) {
  return space.kind == ControlKind::kBinary ? HeadKind::kBernoulli
                                            : HeadKind::kGaussian;
}

void PolicySpec::validate() const {
  for (int h : hidden_layers) {
    if (h < 1) throw ConfigError("hidden layer sizes must be >= 1");
  }
  if (!(min_log_std <= init_log_std && init_log_std <= max_log_std)) {
    throw ConfigError("init_log_std must lie within [min_log_std, max_log_std]");
  }
}

void PPOConfig::validate() const {
  if (rollouts < 1 || epochs < 0 || minibatches < 1) {
    throw ConfigError("rollouts and minibatches must be >= 1, epochs >= 0");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0) ||
      !(gae_lambda >= 0.0 && gae_lambda <= 1.0)) {
    throw ConfigError("gamma and gae_lambda must lie in [0, 1]");
  }
  if (!(lr > 0.0) || !(lr_min > 0.0) || lr_min > lr_max) {
    throw ConfigError("bad learning-rate bounds");
  }
  if (!(kl_threshold >= 0.0) || !(kl_factor > 1.0) || !(lr_factor > 1.0)) {
    throw ConfigError("bad KL-adaptive schedule parameters");
  }
  if (!(grad_norm_clip > 0.0) || !(ratio_clip > 0.0) || !(value_clip > 0.0)) {
    throw ConfigError("clip values must be > 0");
  }
  if (value_loss_coef < 0.0 || entropy_coef < 0.0 || kl_early_stop < 0.0) {
    throw ConfigError("loss coefficients must be >= 0");
  }
  if (!(scaler_clip > 0.0)) throw ConfigError("scaler_clip must be > 0");
}

template <class Scalar>
ActorCritic<Scalar>::ActorCritic(const PolicySpec& spec, int obs_dim,
                                 int action_dim)
    : spec_(spec), obs_dim_(obs_dim), action_dim_(action_dim) {
  spec_.validate();
  if (spec_.head == HeadKind::kAuto) {
    throw ContractError("ActorCritic: head must be resolved");
  }
  std::vector<int> a{obs_dim};
  a.insert(a.end(), spec.hidden_layers.begin(), spec.hidden_layers.end());
  std::vector<int> c = a;
  a.push_back(action_dim);
  c.push_back(1);
  actor_ = Mlp<Scalar>(a, spec.activation);
  critic_ = Mlp<Scalar>(c, spec.activation);
  params_.assign(num_params(), Scalar(0));
}

template <class Scalar>
void ActorCritic<Scalar>::init(CounterRng& rng) {
  std::span<Scalar> p(params_);
  actor_.init(p.first(actor_.num_params()), rng);
  if (spec_.head == HeadKind::kBernoulli) {
    // Zero output layer: every logit starts at 0, i.e. p = 0.5 per thruster.
    const int last = actor_.num_layers() - 1;
    std::fill(p.begin() + actor_.weight_offset(last),
              p.begin() + actor_.num_params(), Scalar(0));
  }
  for (int k = 0; k < log_std_size(); ++k) {
    p[log_std_offset() + k] = Scalar(spec_.init_log_std);
  }
  critic_.init(p.subspan(critic_offset(), critic_.num_params()), rng);
}

template <class Scalar>
Scalar ActorCritic<Scalar>::log_std(std::span<const Scalar> p, int k) const {
  return std::clamp(p[log_std_offset() + k], Scalar(spec_.min_log_std),
                    Scalar(spec_.max_log_std));
}

template <class Scalar>
VectorX<Scalar> log_prob(const ActorCritic<Scalar>& ac,
                         std::span<const Scalar> params,
                         const MatrixX<Scalar>& head_out,
                         const MatrixX<Scalar>& actions) {
  const int B = static_cast<int>(head_out.cols());
  VectorX<Scalar> lp = VectorX<Scalar>::Zero(B);
  for (int k = 0; k < ac.action_dim(); ++k) {
    if (ac.head() == HeadKind::kGaussian) {
      const Scalar ls = ac.log_std(params, k);
      const Scalar inv = std::exp(-ls);
      for (int b = 0; b < B; ++b) {
        const Scalar z = (actions(k, b) - head_out(k, b)) * inv;
        lp[b] += Scalar(-0.5) * z * z - ls - Scalar(kHalfLog2Pi);
      }
    } else {
      for (int b = 0; b < B; ++b) {
        const Scalar l = head_out(k, b);
        lp[b] += actions(k, b) * l - softplus(l);
      }
    }
  }
  return lp;
}

template <class Scalar>
LossTerms ppo_loss(const ActorCritic<Scalar>& ac,
                   std::span<const Scalar> params, const Minibatch<Scalar>& mb,
                   const PPOConfig& cfg, std::span<Scalar> grad) {
  const int B = static_cast<int>(mb.obs.cols());
  const int A = ac.action_dim();
  const bool want_grad = !grad.empty();
  if (want_grad && static_cast<int>(grad.size()) != ac.num_params()) {
    throw ContractError("ppo_loss: gradient buffer has wrong size");
  }
  const Scalar eps(cfg.ratio_clip);
  const Scalar inv_b = Scalar(1) / Scalar(B);

  typename Mlp<Scalar>::Tape actor_tape, critic_tape;
  const MatrixX<Scalar> head =
      ac.actor().forward(ac.actor_params(params), mb.obs,
                         want_grad ? &actor_tape : nullptr);
  const VectorX<Scalar> lp = log_prob(ac, params, head, mb.actions);

  LossTerms out;
  VectorX<Scalar> dlp(B);  // d loss / d log_prob
  double policy = 0.0, kl = 0.0, clipped = 0.0;
  for (int b = 0; b < B; ++b) {
    const Scalar log_ratio = lp[b] - mb.old_log_prob[b];
    const Scalar r = std::exp(log_ratio);
    const Scalar adv = mb.advantages[b];
    const Scalar surr = r * adv;
    const Scalar rc = std::clamp(r, Scalar(1) - eps, Scalar(1) + eps);
    const Scalar surr_clip = rc * adv;
    policy += -double(std::min(surr, surr_clip));
    kl += double((r - Scalar(1)) - log_ratio);
    if (std::abs(r - Scalar(1)) > eps) clipped += 1.0;
    // The clipped branch only carries gradient while r is inside the band.
    const bool unclipped_active = surr <= surr_clip || rc == r;
    dlp[b] = unclipped_active ? -inv_b * r * adv : Scalar(0);
  }
  out.policy = policy / B;
  out.kl = kl / B;
  out.clip_fraction = clipped / B;

  // Entropy per sample and its gradient with respect to the head output.
  const Scalar ent_coef(cfg.entropy_coef);
  double entropy = 0.0;
  MatrixX<Scalar> dhead = MatrixX<Scalar>::Zero(A, B);
  std::vector<Scalar> dlog_std(ac.log_std_size(), Scalar(0));
  for (int k = 0; k < A; ++k) {
    if (ac.head() == HeadKind::kGaussian) {
      const Scalar ls = ac.log_std(params, k);
      entropy += double(Scalar(0.5) + Scalar(kHalfLog2Pi) + ls);
      if (!want_grad) continue;
      const Scalar inv_var = std::exp(Scalar(-2) * ls);
      Scalar g(0);
      for (int b = 0; b < B; ++b) {
        const Scalar diff = mb.actions(k, b) - head(k, b);
        dhead(k, b) = dlp[b] * diff * inv_var;
        g += dlp[b] * (diff * diff * inv_var - Scalar(1));
      }
      g -= ent_coef;
      const Scalar raw = params[ac.log_std_offset() + k];
      const bool inside = raw >= Scalar(ac.spec().min_log_std) &&
                          raw <= Scalar(ac.spec().max_log_std);
      dlog_std[k] = inside ? g : Scalar(0);
    } else {
      for (int b = 0; b < B; ++b) {
        const Scalar l = head(k, b);
        const Scalar s = sigmoid(l);
        entropy += double(softplus(l) - l * s) / B;
        if (!want_grad) continue;
        const Scalar dent = -l * s * (Scalar(1) - s);
        dhead(k, b) = dlp[b] * (mb.actions(k, b) - s) - ent_coef * inv_b * dent;
      }
    }
  }
  out.entropy = entropy;

  const MatrixX<Scalar> v = ac.critic().forward(
      ac.critic_params(params), mb.obs, want_grad ? &critic_tape : nullptr);
  const Scalar vclip(cfg.value_clip);
  const Scalar coef(cfg.value_loss_coef);
  double value = 0.0;
  MatrixX<Scalar> dv(1, B);
  for (int b = 0; b < B; ++b) {
    Scalar pred = v(0, b);
    Scalar gate(1);
    if (cfg.clip_predicted_values) {
      const Scalar delta = v(0, b) - mb.old_values[b];
      const Scalar dc = std::clamp(delta, -vclip, vclip);
      pred = mb.old_values[b] + dc;
      gate = (delta >= -vclip && delta <= vclip) ? Scalar(1) : Scalar(0);
    }
    const Scalar e = pred - mb.returns[b];
    value += double(e * e);
    dv(0, b) = coef * Scalar(2) * e * inv_b * gate;
  }
  out.value = cfg.value_loss_coef * value / B;
  out.total = out.policy + out.value - cfg.entropy_coef * out.entropy;

  if (want_grad) {
    ac.actor().backward(ac.actor_params(params), actor_tape, dhead,
                        grad.first(ac.actor().num_params()));
    for (int k = 0; k < ac.log_std_size(); ++k) {
      grad[ac.log_std_offset() + k] += dlog_std[k];
    }
    ac.critic().backward(
        ac.critic_params(params), critic_tape, dv,
        grad.subspan(ac.critic_offset(), ac.critic().num_params()));
  }
  return out;
}

template class ActorCritic<float>;
template class ActorCritic<double>;
template VectorX<float> log_prob(const ActorCritic<float>&,
                                 std::span<const float>,
                                 const MatrixX<float>&, const MatrixX<float>&);
template VectorX<double> log_prob(const ActorCritic<double>&,
                                  std::span<const double>,
                                  const MatrixX<double>&,
                                  const MatrixX<double>&);
template LossTerms ppo_loss(const ActorCritic<float>&, std::span<const float>,
                            const Minibatch<float>&, const PPOConfig&,
                            std::span<float>);
template LossTerms ppo_loss(const ActorCritic<double>&,
                            std::span<const double>, const Minibatch<double>&,
                            const PPOConfig&, std::span<double>);

void compute_gae(std::span<const double> rewards,
                 std::span<const uint8_t> dones, std::span<const double> values,
                 std::span<const double> last_values, int num_envs,
                 double gamma, double lambda, std::span<double> advantages,
                 std::span<double> returns) {
  const size_t n = rewards.size();
  if (num_envs < 1 || n % num_envs != 0 || dones.size() != n ||
      values.size() != n || advantages.size() != n || returns.size() != n ||
      last_values.size() != size_t(num_envs)) {
    throw ContractError("compute_gae: inconsistent buffer sizes");
  }
  const int steps = static_cast<int>(n / num_envs);
  for (int e = 0; e < num_envs; ++e) {
    double adv = 0.0;
    for (int t = steps - 1; t >= 0; --t) {
      const size_t i = size_t(t) * num_envs + e;
      const double next =
          t + 1 < steps ? values[i + num_envs] : last_values[e];
      const double not_done = dones[i] ? 0.0 : 1.0;
      // The return is formed first so gamma = 0 yields the reward exactly.
      const double ret = rewards[i] + gamma * not_done * (next + lambda * adv);
      adv = ret - values[i];
      advantages[i] = adv;
      returns[i] = ret;
    }
  }
}

void standardize(std::span<double> x) {
  if (x.empty()) return;
  const double n = double(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : x) sq += (v - mean) * (v - mean);
  const double sd = x.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
  for (double& v : x) v = (v - mean) / (sd + 1e-8);
}

Adam::Adam(int n, double beta1, double beta2, double eps)
    : m_(n, 0.0f), v_(n, 0.0f), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(std::span<float> params, std::span<const float> grad,
                double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw ContractError("Adam::step: size mismatch");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, t_);
  const double c2 = 1.0 - std::pow(beta2_, t_);
  const float b1 = float(beta1_), b2 = float(beta2_);
  const float step = float(lr / c1);
  const float sqrt_c2 = float(std::sqrt(c2));
  const float eps = float(eps_);
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0f - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0f - b2) * grad[i] * grad[i];
    params[i] -= step * m_[i] / (std::sqrt(v_[i]) / sqrt_c2 + eps);
  }
}

double clip_grad_norm(std::span<float> grad, double max_norm) {
  double sq = 0.0;
  for (float g : grad) sq += double(g) * g;
  const double norm = std::sqrt(sq);
  const double coef = max_norm / (norm + 1e-6);
  if (coef < 1.0) {
    for (float& g : grad) g = float(g * coef);
  }
  return norm;
}

KLAdaptiveLR::KLAdaptiveLR(const PPOConfig& cfg)
    : lr_(std::clamp(cfg.lr, cfg.lr_min, cfg.lr_max)),
      threshold_(cfg.kl_threshold),
      lr_min_(cfg.lr_min),
      lr_max_(cfg.lr_max),
      kl_factor_(cfg.kl_factor),
      lr_factor_(cfg.lr_factor) {}

double KLAdaptiveLR::step(double kl) {
  if (kl > threshold_ * kl_factor_) {
    lr_ = std::max(lr_ / lr_factor_, lr_min_);
  } else if (kl < threshold_ / kl_factor_) {
    lr_ = std::min(lr_ * lr_factor_, lr_max_);
  }
  return lr_;
}

Agent Agent::create(PolicySpec spec, const RobotSpec& robot, int obs_dim,
                    uint64_t seed, double scaler_clip) {
  if (spec.head == HeadKind::kAuto) spec.head = head_for(robot.control_space);
  Agent a;
  a.model = ActorCritic<float>(spec, obs_dim, robot.control_space.dim);
  CounterRng rng = CounterRng::for_stream(seed, 0, 0, StreamId::kInit);
  a.model.init(rng);
  a.obs_scaler = RunningScaler(obs_dim, scaler_clip);
  a.value_scaler = RunningScaler(1, scaler_clip);
  return a;
}

void check_agent_matches(const Agent& agent, const EnvBatch& env) {
  const auto& m = agent.model;
  if (m.obs_dim() != env.obs_dim() || m.action_dim() != env.action_dim()) {
    throw ContractError("policy dimensions (" + std::to_string(m.obs_dim()) +
                        ", " + std::to_string(m.action_dim()) +
                        ") do not match the environment (" +
                        std::to_string(env.obs_dim()) + ", " +
                        std::to_string(env.action_dim()) + ")");
  }
  if (m.head() != head_for(env.robot().control_space)) {
    throw ContractError("policy head '" + to_string(m.head()) +
                        "' does not match the control space of " +
                        env.robot().name);
  }
  if (agent.obs_scaler.dim() != env.obs_dim() ||
      agent.value_scaler.dim() != 1) {
    throw ContractError("standardizer dimensions do not match");
  }
}

ActOutput act(const Agent& agent, std::span<const double> obs_std, int rows,
              std::span<CounterRng> rngs) {
  const auto& m = agent.model;
  const int D = m.obs_dim();
  const int A = m.action_dim();
  if (obs_std.size() != size_t(rows) * D) {
    throw ContractError("act: observation batch has wrong size");
  }
  if (!rngs.empty() && static_cast<int>(rngs.size()) != rows) {
    throw ContractError("act: need one random stream per row");
  }
  MatrixX<float> x(D, rows);
  for (int b = 0; b < rows; ++b) {
    for (int d = 0; d < D; ++d) x(d, b) = float(obs_std[size_t(b) * D + d]);
  }
  const std::span<const float> p(m.params());
  const MatrixX<float> head = m.actor().forward(m.actor_params(p), x);
  const MatrixX<float> v = m.critic().forward(m.critic_params(p), x);

  MatrixX<float> a(A, rows);
  for (int b = 0; b < rows; ++b) {
    for (int k = 0; k < A; ++k) {
      if (m.head() == HeadKind::kGaussian) {
        const double mean = head(k, b);
        a(k, b) = rngs.empty()
                      ? float(mean)
                      : float(mean + std::exp(double(m.log_std(p, k))) *
                                         rngs[b].normal());
      } else if (rngs.empty()) {
        a(k, b) = head(k, b) > 0.0f ? 1.0f : 0.0f;
      } else {
        a(k, b) = rngs[b].uniform() < double(sigmoid(head(k, b))) ? 1.0f
                                                                   : 0.0f;
      }
    }
  }
  const VectorX<float> lp = log_prob(m, p, head, a);

  ActOutput out;
  out.actions.resize(size_t(rows) * A);
  out.log_prob.resize(rows);
  out.values.resize(rows);
  for (int b = 0; b < rows; ++b) {
    for (int k = 0; k < A; ++k) out.actions[size_t(b) * A + k] = a(k, b);
    out.log_prob[b] = lp[b];
    out.values[b] = agent.value_scaler.inverse(v(0, b), 0);
  }
  return out;
}

void collect_rollout(EnvBatch& env, Agent& agent, int steps, uint64_t seed,
                     uint64_t rollout_index, RolloutBuffer& buf,
                     const std::function<void(const StepResult&)>& on_step) {
  check_agent_matches(agent, env);
  if (steps < 1) throw ContractError("collect_rollout: steps must be >= 1");
  const int N = env.num_envs();
  const int D = env.obs_dim();
  const int A = env.action_dim();
  buf.steps = steps;
  buf.num_envs = N;
  buf.obs_dim = D;
  buf.action_dim = A;
  const size_t n = buf.size();
  buf.obs.resize(n * D);
  buf.actions.resize(n * A);
  buf.log_prob.resize(n);
  buf.values.resize(n);
  buf.rewards.resize(n);
  buf.dones.resize(n);
  buf.truncated.resize(n);
  buf.last_values.resize(N);

  std::vector<CounterRng> rngs;
  rngs.reserve(N);
  for (int i = 0; i < N; ++i) {
    rngs.push_back(
        CounterRng::for_stream(seed, i, rollout_index, StreamId::kPolicy));
  }
  std::vector<double> obs(env.observations().begin(),
                          env.observations().end());
  for (int t = 0; t < steps; ++t) {
    agent.obs_scaler.update(obs, N);
    agent.obs_scaler.normalize(obs);
    const ActOutput ao = act(agent, obs, N, rngs);
    const size_t row0 = size_t(t) * N;
    std::copy(obs.begin(), obs.end(), buf.obs.begin() + row0 * D);
    std::copy(ao.actions.begin(), ao.actions.end(),
              buf.actions.begin() + row0 * A);
    std::copy(ao.log_prob.begin(), ao.log_prob.end(),
              buf.log_prob.begin() + row0);
    std::copy(ao.values.begin(), ao.values.end(), buf.values.begin() + row0);

    const StepResult r = env.step(ao.actions);
    for (int i = 0; i < N; ++i) {
      buf.rewards[row0 + i] = r.reward[i];
      buf.dones[row0 + i] = r.done(i);
      buf.truncated[row0 + i] = r.clean_term[i] && !r.early_term[i] &&
                                (r.info[i].events & kEventTimeout);
    }
    if (on_step) on_step(r);
    obs = r.obs;
  }
  std::vector<double> last = obs;
  agent.obs_scaler.normalize(last);
  const ActOutput tail = act(agent, last, N, {});
  buf.last_values = tail.values;
}

UpdateStats ppo_update(Agent& agent, RolloutBuffer& buf, const PPOConfig& cfg,
                       Adam& adam, KLAdaptiveLR& sched, uint64_t seed,
                       uint64_t update_index) {
  const size_t n = buf.size();
  const int D = buf.obs_dim;
  const int A = buf.action_dim;
  if (n == 0) throw ContractError("ppo_update: empty buffer");

  std::vector<double> rewards = buf.rewards;
  if (cfg.time_limit_bootstrap) {
    for (size_t i = 0; i < n; ++i) {
      if (buf.truncated[i]) rewards[i] += cfg.gamma * buf.values[i];
    }
  }
  buf.advantages.resize(n);
  buf.returns.resize(n);
  compute_gae(rewards, buf.dones, buf.values, buf.last_values, buf.num_envs,
              cfg.gamma, cfg.gae_lambda, buf.advantages, buf.returns);
  if (cfg.standardize_advantages) standardize(buf.advantages);

  // The scaler sees the stored values before the returns. Feeding it returns
  // alone lets the value estimate run away under large learning rates.
  agent.value_scaler.update(buf.values, static_cast<int>(n));
  agent.value_scaler.update(buf.returns, static_cast<int>(n));
  std::vector<double> ret_s(n), val_s(n);
  for (size_t i = 0; i < n; ++i) {
    ret_s[i] = agent.value_scaler.normalize(buf.returns[i], 0);
    val_s[i] = agent.value_scaler.normalize(buf.values[i], 0);
  }

  UpdateStats stats;
  auto& model = agent.model;
  std::vector<float> grad(model.num_params());
  std::vector<size_t> order(n);
  const int mbs = std::min<int>(cfg.minibatches, static_cast<int>(n));
  Minibatch<float> mb;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t(0));
    CounterRng shuffle = CounterRng::for_stream(
        seed, update_index, static_cast<uint64_t>(epoch), StreamId::kShuffle);
    for (size_t i = n - 1; i > 0; --i) {
      const size_t j = shuffle.next_u64() % (i + 1);
      std::swap(order[i], order[j]);
    }
    double kl_sum = 0.0, pl = 0.0, vl = 0.0, ent = 0.0, gn = 0.0;
    bool stop = false;
    int done_batches = 0;
    for (int m = 0; m < mbs; ++m) {
      const size_t lo = n * m / mbs;
      const size_t hi = n * (m + 1) / mbs;
      const int B = static_cast<int>(hi - lo);
      mb.obs.resize(D, B);
      mb.actions.resize(A, B);
      mb.old_log_prob.resize(B);
      mb.advantages.resize(B);
      mb.returns.resize(B);
      mb.old_values.resize(B);
      for (int b = 0; b < B; ++b) {
        const size_t s = order[lo + b];
        for (int d = 0; d < D; ++d) mb.obs(d, b) = buf.obs[s * D + d];
        for (int k = 0; k < A; ++k) mb.actions(k, b) = buf.actions[s * A + k];
        mb.old_log_prob[b] = float(buf.log_prob[s]);
        mb.advantages[b] = float(buf.advantages[s]);
        mb.returns[b] = float(ret_s[s]);
        mb.old_values[b] = float(val_s[s]);
      }
      std::fill(grad.begin(), grad.end(), 0.0f);
      const LossTerms lt = ppo_loss<float>(
          model, std::span<const float>(model.params()), mb, cfg, grad);
      if (!std::isfinite(lt.total) || !std::isfinite(lt.kl)) {
        std::ostringstream msg;
        msg << "non-finite PPO loss at update " << update_index << ", epoch "
            << epoch << ", minibatch " << m << ": policy=" << lt.policy
            << " value=" << lt.value << " entropy=" << lt.entropy
            << " kl=" << lt.kl << " lr=" << sched.lr();
        throw TrainingFault(msg.str());
      }
      if (cfg.kl_early_stop > 0.0 && lt.kl > cfg.kl_early_stop) {
        stop = true;
        kl_sum += lt.kl;
        ++done_batches;
        break;
      }
      gn += clip_grad_norm(grad, cfg.grad_norm_clip);
      adam.step(model.params(), grad, sched.lr());
      kl_sum += lt.kl;
      pl += lt.policy;
      vl += lt.value;
      ent += lt.entropy;
      ++done_batches;
    }
    const double k = std::max(1, done_batches);
    stats.kl = kl_sum / k;
    stats.policy_loss = pl / k;
    stats.value_loss = vl / k;
    stats.entropy = ent / k;
    stats.grad_norm = gn / k;
    stats.epochs_run = epoch + 1;
    sched.step(stats.kl);
    if (stop) break;
  }
  stats.lr = sched.lr();
  return stats;
}

PpoTrainer::PpoTrainer(TrainConfig cfg)
    : cfg_(std::move(cfg)), sched_(cfg_.ppo) {
  cfg_.ppo.validate();
  cfg_.metrics.validate();
  if (cfg_.epochs < 0) throw ConfigError("epochs must be >= 0");
  env_ = std::make_unique<EnvBatch>(cfg_.env);
  agent_ = Agent::create(cfg_.policy, env_->robot(), env_->obs_dim(),
                         cfg_.env.seed, cfg_.ppo.scaler_clip);
  cfg_.policy = agent_.model.spec();
  adam_ = Adam(agent_.model.num_params(), cfg_.ppo.adam_beta1,
               cfg_.ppo.adam_beta2, cfg_.ppo.adam_eps);
  if (cfg_.desync_episodes) {
    CounterRng rng = CounterRng::for_stream(cfg_.env.seed, 0, 1, StreamId::kInit);
    for (int i = 0; i < env_->num_envs(); ++i) {
      env_->set_step_count(i, rng.uniform_int(0, env_->max_episode_steps() - 1));
    }
  }
  recorder_ = attach_hooks(*env_, cfg_.metrics);
  episode_return_.assign(env_->num_envs(), 0.0);
  start_time_ = now_seconds();
}

PpoTrainer::~PpoTrainer() = default;

EpochLog PpoTrainer::run_epoch() {
  std::vector<double> finished;
  collect_rollout(*env_, agent_, cfg_.ppo.rollouts, cfg_.env.seed, epoch_,
                  buffer_, [&](const StepResult& r) {
                    for (int i = 0; i < env_->num_envs(); ++i) {
                      episode_return_[i] += r.reward[i];
                      if (r.done(i)) {
                        finished.push_back(episode_return_[i]);
                        episode_return_[i] = 0.0;
                      }
                    }
                  });
  const UpdateStats us = ppo_update(agent_, buffer_, cfg_.ppo, adam_, sched_,
                                    cfg_.env.seed, epoch_);
  EpochLog log;
  log.epoch = epoch_;
  log.episodes = static_cast<int>(finished.size());
  if (finished.empty()) {
    log.mean_reward = std::numeric_limits<double>::quiet_NaN();
    log.std_reward = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double n = double(finished.size());
    log.mean_reward = std::accumulate(finished.begin(), finished.end(), 0.0) / n;
    double sq = 0.0;
    for (double x : finished) sq += (x - log.mean_reward) * (x - log.mean_reward);
    log.std_reward = std::sqrt(sq / n);
  }
  const std::vector<EpisodeMetrics> eps = recorder_->take_episodes();
  if (eps.empty()) {
    log.success_rate = std::numeric_limits<double>::quiet_NaN();
    log.mean_goals_reached = std::numeric_limits<double>::quiet_NaN();
  } else {
    double succ = 0.0, goals = 0.0;
    for (const auto& e : eps) {
      succ += e.success ? 1.0 : 0.0;
      goals += e.goals_reached.value_or(0);
    }
    log.success_rate = succ / eps.size();
    log.mean_goals_reached = goals / eps.size();
  }
  log.kl = us.kl;
  log.lr = us.lr;
  log.policy_loss = us.policy_loss;
  log.value_loss = us.value_loss;
  log.wall_clock = now_seconds() - start_time_;
  ++epoch_;
  return log;
}

std::vector<EpochLog> PpoTrainer::train(
    const std::function<void(const EpochLog&)>& on_epoch) {
  std::vector<EpochLog> logs;
  while (epoch_ < cfg_.epochs) {
    logs.push_back(run_epoch());
    if (on_epoch) on_epoch(logs.back());
  }
  return logs;
}

std::vector<EpisodeMetrics> evaluate_policy(
    EnvBatch& env, const Agent& agent, int episodes, const MetricsConfig& cfg,
    const std::function<void(const StepResult&)>& on_step) {
  check_agent_matches(agent, env);
  if (episodes < 1) throw ContractError("evaluate_policy: episodes < 1");
  const int N = env.num_envs();
  const int k = (episodes + N - 1) / N;
  env.reset();
  std::vector<uint64_t> start(N);
  for (int i = 0; i < N; ++i) start[i] = env.episode(i);
  MetricsRecorder rec(env.task().kind(), N, env.config().control_dt(), cfg);
  rec.attach(env);
  std::vector<double> obs(env.observations().begin(),
                          env.observations().end());
  const long max_steps = long(k) * env.max_episode_steps() + 1;
  for (long s = 0; s < max_steps; ++s) {
    const auto& fin = rec.finished_per_env();
    if (std::all_of(fin.begin(), fin.end(), [&](int f) { return f >= k; })) {
      break;
    }
    agent.obs_scaler.normalize(obs);
    const ActOutput ao = act(agent, obs, N, {});
    StepResult r = env.step(ao.actions);
    if (on_step) on_step(r);
    obs = std::move(r.obs);
  }
  rec.detach();
  std::vector<EpisodeMetrics> out;
  for (auto& e : rec.take_episodes()) {
    e.episode -= start[e.env];
    if (e.episode < uint64_t(k)) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.episode != b.episode ? a.episode < b.episode : a.env < b.env;
  });
  if (static_cast<int>(out.size()) > episodes) out.resize(episodes);
  return out;
}

}  // namespace navforge
