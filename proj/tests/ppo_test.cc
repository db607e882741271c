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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "navforge/errors.h"

namespace navforge {
namespace {

// Brute-force lambda-weighted sum of n-step advantages for env e.
double gae_oracle(const std::vector<double>& r, const std::vector<uint8_t>& d,
                  const std::vector<double>& v, const std::vector<double>& last,
                  int n_env, int e, int t, double gamma, double lambda) {
  const int T = static_cast<int>(r.size()) / n_env;
  const int N = T - t;
  auto nstep = [&](int n) {
    double acc = 0.0, disc = 1.0;
    for (int i = 0; i < n; ++i) {
      const int idx = (t + i) * n_env + e;
      acc += disc * r[idx];
      if (d[idx]) return acc - v[t * n_env + e];
      disc *= gamma;
    }
    const double boot = t + n < T ? v[(t + n) * n_env + e] : last[e];
    return acc + disc * boot - v[t * n_env + e];
  };
  double out = 0.0;
  for (int n = 1; n < N; ++n) out += (1 - lambda) * std::pow(lambda, n - 1) * nstep(n);
  return out + std::pow(lambda, N - 1) * nstep(N);
}

TEST(Gae, MatchesBruteForceOracle) {
  CounterRng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_env = 3;
    const int T = 1 + trial % 8;
    const int n = T * n_env;
    std::vector<double> r(n), v(n), last(n_env), adv(n), ret(n);
    std::vector<uint8_t> d(n);
    for (int i = 0; i < n; ++i) {
      r[i] = rng.uniform(-1, 2);
      v[i] = rng.uniform(-3, 3);
      d[i] = rng.uniform() < 0.2;
    }
    for (double& x : last) x = rng.uniform(-3, 3);
    const double gamma = 0.99, lambda = 0.95;
    compute_gae(r, d, v, last, n_env, gamma, lambda, adv, ret);
    for (int t = 0; t < T; ++t) {
      for (int e = 0; e < n_env; ++e) {
        const int i = t * n_env + e;
        ASSERT_NEAR(adv[i], gae_oracle(r, d, v, last, n_env, e, t, gamma, lambda),
                    1e-10);
        ASSERT_NEAR(ret[i], adv[i] + v[i], 1e-12);
      }
    }
  }
}

TEST(Gae, LambdaZeroIsTdError) {
  const std::vector<double> r{1, 2, 3, 4}, v{0.5, 0.1, -0.2, 0.7}, last{0.3, -1};
  const std::vector<uint8_t> d{0, 0, 0, 1};
  std::vector<double> adv(4), ret(4);
  compute_gae(r, d, v, last, 2, 0.9, 0.0, adv, ret);
  EXPECT_NEAR(adv[0], 1 + 0.9 * -0.2 - 0.5, 1e-15);
  EXPECT_NEAR(adv[1], 2 + 0.9 * 0.7 - 0.1, 1e-15);
  EXPECT_NEAR(adv[2], 3 + 0.9 * 0.3 + 0.2, 1e-15);
  EXPECT_NEAR(adv[3], 4 - 0.7, 1e-15);
}

TEST(Gae, GammaZeroReturnsAreRewards) {
  const std::vector<double> r{1, -2, 3, 0.5, 7, 1}, v{4, 4, 4, 4, 4, 4}, last{9};
  const std::vector<uint8_t> d(6, 0);
  std::vector<double> adv(6), ret(6);
  compute_gae(r, d, v, last, 1, 0.0, 0.95, adv, ret);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(ret[i], r[i]);
    EXPECT_EQ(adv[i], r[i] - v[i]);
  }
}

TEST(Gae, SizeMismatch) {
  std::vector<double> a(4), b(4), c(2), adv(4), ret(4);
  std::vector<uint8_t> d(3);
  EXPECT_THROW(compute_gae(a, d, b, c, 2, 0.9, 0.9, adv, ret), ContractError);
}

TEST(Standardize, ZeroMeanUnitUnbiasedStd) {
  std::vector<double> x{1, 2, 3, 4, 10};
  standardize(x);
  double m = 0, sq = 0;
  for (double v : x) m += v;
  m /= x.size();
  for (double v : x) sq += (v - m) * (v - m);
  EXPECT_NEAR(m, 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(sq / (x.size() - 1)), 1.0, 1e-7);
}

// Toy Gaussian policy: obs_dim 2, one action, no hidden layer. The actor
// has w (2) + b (1) + log_std (1) = 4 parameters.
struct Toy {
  PolicySpec spec;
  ActorCritic<double> ac;
  Minibatch<double> mb;
  PPOConfig cfg;

  Toy() {
    spec.hidden_layers = {};
    spec.head = HeadKind::kGaussian;
    ac = ActorCritic<double>(spec, 2, 1);
    CounterRng rng(5);
    ac.init(rng);
    ac.params()[ac.log_std_offset()] = -0.3;
    const int B = 6;
    mb.obs.resize(2, B);
    mb.actions.resize(1, B);
    mb.old_log_prob.resize(B);
    mb.advantages.resize(B);
    mb.returns.resize(B);
    mb.old_values.resize(B);
    for (int b = 0; b < B; ++b) {
      mb.obs(0, b) = rng.uniform(-1, 1);
      mb.obs(1, b) = rng.uniform(-1, 1);
      mb.actions(0, b) = rng.uniform(-1, 1);
      mb.advantages[b] = rng.uniform(-1, 1);
      mb.returns[b] = rng.uniform(-1, 1);
    }
    const VectorX<double> lp = current_log_prob();
    const MatrixX<double> v =
        ac.critic().forward(ac.critic_params(ac.params()), mb.obs);
    for (int b = 0; b < B; ++b) {
      // Spread ratios across and beyond the clip band.
      mb.old_log_prob[b] = lp[b] + rng.uniform(-0.5, 0.5);
      mb.old_values[b] = v(0, b) + rng.uniform(-0.4, 0.4);
    }
  }

  VectorX<double> current_log_prob() const {
    const auto& p = ac.params();
    return log_prob(ac, std::span<const double>(p),
                    ac.actor().forward(ac.actor_params(p), mb.obs), mb.actions);
  }
};

TEST(PpoLoss, HandEvaluatedClippedLoss) {
  Toy toy;
  const auto& p = toy.ac.params();
  const double w0 = p[0], w1 = p[1], b = p[2], ls = p[3];
  const int nc = toy.ac.critic_offset();
  const double cw0 = p[nc], cw1 = p[nc + 1], cb = p[nc + 2];
  double policy = 0.0, value = 0.0;
  const int B = static_cast<int>(toy.mb.obs.cols());
  for (int k = 0; k < B; ++k) {
    const double x0 = toy.mb.obs(0, k), x1 = toy.mb.obs(1, k);
    const double mu = w0 * x0 + w1 * x1 + b;
    const double a = toy.mb.actions(0, k);
    const double lp = -0.5 * std::pow((a - mu) / std::exp(ls), 2) - ls -
                      0.5 * std::log(2 * M_PI);
    const double ratio = std::exp(lp - toy.mb.old_log_prob[k]);
    const double A = toy.mb.advantages[k];
    policy += -std::min(ratio * A, std::clamp(ratio, 0.8, 1.2) * A);
    const double vpred = cw0 * x0 + cw1 * x1 + cb;
    const double old = toy.mb.old_values[k];
    const double clipped = old + std::clamp(vpred - old, -0.2, 0.2);
    value += std::pow(clipped - toy.mb.returns[k], 2);
  }
  const LossTerms lt = ppo_loss(toy.ac, std::span<const double>(p), toy.mb, toy.cfg);
  EXPECT_NEAR(lt.policy, policy / B, 1e-8);
  EXPECT_NEAR(lt.value, 2.0 * value / B, 1e-8);
  EXPECT_NEAR(lt.total, policy / B + 2.0 * value / B, 1e-8);
}

TEST(PpoLoss, GradientMatchesFiniteDifferences) {
  Toy toy;
  std::vector<double>& p = toy.ac.params();
  std::vector<double> grad(p.size(), 0.0);
  ppo_loss(toy.ac, std::span<const double>(p), toy.mb, toy.cfg,
           std::span<double>(grad));
  const double h = 1e-6;
  for (size_t k = 0; k < p.size(); ++k) {
    std::vector<double> hi = p, lo = p;
    hi[k] += h;
    lo[k] -= h;
    const double fd =
        (ppo_loss(toy.ac, std::span<const double>(hi), toy.mb, toy.cfg).total -
         ppo_loss(toy.ac, std::span<const double>(lo), toy.mb, toy.cfg).total) /
        (2 * h);
    const double scale = std::max(1e-3, std::abs(fd));
    EXPECT_LT(std::abs(grad[k] - fd) / scale, 1e-4) << "param " << k;
  }
}

TEST(PpoLoss, RatioOneMatchesUnclippedGradient) {
  Toy toy;
  toy.mb.old_log_prob = toy.current_log_prob();
  const auto& p = toy.ac.params();
  std::vector<double> g_clip(p.size(), 0.0), g_free(p.size(), 0.0);
  ppo_loss(toy.ac, std::span<const double>(p), toy.mb, toy.cfg,
           std::span<double>(g_clip));
  PPOConfig wide = toy.cfg;
  wide.ratio_clip = 1e9;
  const LossTerms lt = ppo_loss(toy.ac, std::span<const double>(p), toy.mb,
                                wide, std::span<double>(g_free));
  for (int k = 0; k < toy.ac.critic_offset(); ++k) {
    EXPECT_DOUBLE_EQ(g_clip[k], g_free[k]);
  }
  EXPECT_NEAR(lt.kl, 0.0, 1e-15);
}

TEST(PpoLoss, ZeroEntropyCoefficientLeavesGradientUnchanged) {
  Toy toy;
  const auto& p = toy.ac.params();
  std::vector<double> g0(p.size(), 0.0), g1(p.size(), 0.0);
  const LossTerms l0 = ppo_loss(toy.ac, std::span<const double>(p), toy.mb,
                                toy.cfg, std::span<double>(g0));
  EXPECT_EQ(l0.total, l0.policy + l0.value);
  PPOConfig with = toy.cfg;
  with.entropy_coef = 0.01;
  ppo_loss(toy.ac, std::span<const double>(p), toy.mb, with,
           std::span<double>(g1));
  // Only the log std gradient feels the Gaussian entropy.
  EXPECT_NEAR(g1[3] - g0[3], -0.01, 1e-12);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(g0[k], g1[k]);
}

TEST(PpoLoss, BernoulliGradientMatchesFiniteDifferences) {
  PolicySpec spec;
  spec.hidden_layers = {3};
  spec.head = HeadKind::kBernoulli;
  ActorCritic<double> ac(spec, 2, 4);
  CounterRng rng(9);
  ac.init(rng);
  for (double& v : ac.params()) v += rng.uniform(-0.3, 0.3);
  Minibatch<double> mb;
  const int B = 5;
  mb.obs.resize(2, B);
  mb.actions.resize(4, B);
  mb.old_log_prob.resize(B);
  mb.advantages.resize(B);
  mb.returns.resize(B);
  mb.old_values.resize(B);
  for (int b = 0; b < B; ++b) {
    mb.obs(0, b) = rng.uniform(-1, 1);
    mb.obs(1, b) = rng.uniform(-1, 1);
    for (int k = 0; k < 4; ++k) mb.actions(k, b) = rng.uniform() < 0.5;
    mb.old_log_prob[b] = rng.uniform(-3.2, -2.4);
    mb.advantages[b] = rng.uniform(-1, 1);
    mb.returns[b] = rng.uniform(-1, 1);
    mb.old_values[b] = rng.uniform(-1, 1);
  }
  PPOConfig cfg;
  cfg.entropy_coef = 0.05;
  std::vector<double>& p = ac.params();
  std::vector<double> grad(p.size(), 0.0);
  ppo_loss(ac, std::span<const double>(p), mb, cfg, std::span<double>(grad));
  const double h = 1e-6;
  for (size_t k = 0; k < p.size(); ++k) {
    std::vector<double> hi = p, lo = p;
    hi[k] += h;
    lo[k] -= h;
    const double fd = (ppo_loss(ac, std::span<const double>(hi), mb, cfg).total -
                       ppo_loss(ac, std::span<const double>(lo), mb, cfg).total) /
                      (2 * h);
    EXPECT_LT(std::abs(grad[k] - fd) / std::max(1e-3, std::abs(fd)), 1e-4) << k;
  }
}

TEST(PpoLoss, BernoulliLogProbFactorizes) {
  PolicySpec spec;
  spec.hidden_layers = {4};
  spec.head = HeadKind::kBernoulli;
  ActorCritic<double> ac(spec, 3, 8);
  CounterRng rng(4);
  ac.init(rng);
  MatrixX<double> logits(8, 10), bits(8, 10);
  for (int i = 0; i < logits.size(); ++i) {
    logits.data()[i] = rng.uniform(-4, 4);
    bits.data()[i] = rng.uniform() < 0.5 ? 1.0 : 0.0;
  }
  const VectorX<double> lp =
      log_prob(ac, std::span<const double>(ac.params()), logits, bits);
  for (int b = 0; b < 10; ++b) {
    double sum = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double p1 = 1.0 / (1.0 + std::exp(-logits(k, b)));
      sum += std::log(bits(k, b) > 0.5 ? p1 : 1.0 - p1);
    }
    EXPECT_NEAR(lp[b], sum, 1e-12);
  }
}

TEST(Policy, InitialHeads) {
  const Agent fp = Agent::create(PolicySpec{}, default_robot_spec("floating_platform"),
                                 10, 1);
  EXPECT_EQ(fp.model.head(), HeadKind::kBernoulli);
  std::vector<double> obs(3 * 10);
  CounterRng rng(2);
  for (double& o : obs) o = rng.normal();
  // Zero logits: deterministic bits are all 0 and each bit has p = 0.5.
  const ActOutput out = act(fp, obs, 3, {});
  for (double a : out.actions) EXPECT_EQ(a, 0.0);
  for (double lp : out.log_prob) EXPECT_NEAR(lp, 8 * std::log(0.5), 1e-5);

  const Agent tb = Agent::create(PolicySpec{}, default_robot_spec("turtlebot2"), 8, 1);
  EXPECT_EQ(tb.model.head(), HeadKind::kGaussian);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(tb.model.params()[tb.model.log_std_offset() + k], 0.0f);
  }
}

TEST(Optim, KlAdaptiveLrStaysInBoundsAndFollowsRule) {
  PPOConfig cfg;
  KLAdaptiveLR s(cfg);
  EXPECT_EQ(s.lr(), 5e-4);
  EXPECT_NEAR(s.step(0.05), 5e-4 / 1.5, 1e-18);
  EXPECT_NEAR(s.step(0.008), 5e-4 / 1.5, 1e-18);
  EXPECT_NEAR(s.step(0.001), 5e-4, 1e-18);
  CounterRng rng(3);
  for (int i = 0; i < 10000; ++i) {
    s.step(rng.uniform() < 0.5 ? 0.0 : 1.0);
    ASSERT_GE(s.lr(), 1e-6);
    ASSERT_LE(s.lr(), 1e-2);
  }
}

TEST(Optim, ClipGradNorm) {
  std::vector<float> g{3, 4};
  EXPECT_NEAR(clip_grad_norm(g, 1.0), 5.0, 1e-12);
  EXPECT_NEAR(std::hypot(g[0], g[1]), 1.0, 1e-6);
  std::vector<float> small{0.3f, 0.4f};
  clip_grad_norm(small, 1.0);
  EXPECT_EQ(small[0], 0.3f);
}

TEST(Optim, AdamFirstStepMovesByLr) {
  Adam adam(2);
  std::vector<float> p{1.0f, -1.0f};
  const std::vector<float> g{0.5f, -2.0f};
  adam.step(p, g, 0.1);
  // Bias-corrected first step is lr * sign(g).
  EXPECT_NEAR(p[0], 0.9f, 1e-6);
  EXPECT_NEAR(p[1], -0.9f, 1e-6);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(Ppo, DefaultsMatchHyperparameterTable) {
  const PPOConfig c;
  EXPECT_EQ(c.rollouts, 32);
  EXPECT_EQ(c.epochs, 8);
  EXPECT_EQ(c.minibatches, 8);
  EXPECT_EQ(c.gamma, 0.99);
  EXPECT_EQ(c.gae_lambda, 0.95);
  EXPECT_EQ(c.lr, 5e-4);
  EXPECT_EQ(c.kl_threshold, 0.008);
  EXPECT_EQ(c.grad_norm_clip, 1.0);
  EXPECT_EQ(c.ratio_clip, 0.2);
  EXPECT_EQ(c.value_clip, 0.2);
  EXPECT_TRUE(c.clip_predicted_values);
  EXPECT_EQ(c.value_loss_coef, 2.0);
  EXPECT_EQ(c.entropy_coef, 0.0);
  EXPECT_EQ(c.kl_early_stop, 0.0);
  EXPECT_FALSE(c.time_limit_bootstrap);
}

TEST(Ppo, RolloutSizeAndDeterminism) {
  EnvConfig ec;
  ec.num_envs = 8;
  ec.seed = 4;
  auto run = [&] {
    EnvBatch env(ec);
    PolicySpec ps;
    ps.hidden_layers = {16};
    Agent agent = Agent::create(ps, env.robot(), env.obs_dim(), 4);
    RolloutBuffer buf;
    collect_rollout(env, agent, 32, 4, 0, buf);
    return buf;
  };
  const RolloutBuffer a = run(), b = run();
  EXPECT_EQ(a.size(), 8u * 32u);
  EXPECT_EQ(a.obs, b.obs);
  EXPECT_EQ(a.actions, b.actions);
  EXPECT_EQ(a.rewards, b.rewards);
}

TEST(Ppo, HeadMismatchIsContractError) {
  EnvConfig ec;
  EnvBatch env(ec);
  PolicySpec ps;
  ps.head = HeadKind::kBernoulli;
  const Agent agent = Agent::create(ps, env.robot(), env.obs_dim(), 1);
  EXPECT_THROW(check_agent_matches(agent, env), ContractError);
}

TEST(Ppo, ZeroEpochsLeavesPolicyUnchanged) {
  TrainConfig tc;
  tc.env.num_envs = 4;
  tc.epochs = 0;
  tc.policy.hidden_layers = {8};
  PpoTrainer t(tc);
  const auto before = t.agent().model.params();
  EXPECT_TRUE(t.train().empty());
  EXPECT_EQ(t.agent().model.params(), before);
}

TEST(Ppo, SameSeedSameLearningCurve) {
  auto run = [] {
    TrainConfig tc;
    tc.env.num_envs = 16;
    tc.env.seed = 11;
    tc.env.workers = 1;
    tc.epochs = 3;
    tc.policy.hidden_layers = {16, 16};
    PpoTrainer t(tc);
    std::vector<double> curve;
    for (const EpochLog& l : t.train()) curve.push_back(l.value_loss);
    curve.push_back(t.lr());
    curve.insert(curve.end(), t.agent().model.params().begin(),
                 t.agent().model.params().end());
    return curve;
  };
  EXPECT_EQ(run(), run());
}

TEST(Ppo, UpdateChangesParametersAndReportsLr) {
  TrainConfig tc;
  tc.env.num_envs = 16;
  tc.epochs = 1;
  tc.policy.hidden_layers = {16};
  PpoTrainer t(tc);
  const auto before = t.agent().model.params();
  const EpochLog log = t.run_epoch();
  EXPECT_NE(t.agent().model.params(), before);
  EXPECT_GE(log.lr, 1e-6);
  EXPECT_LE(log.lr, 1e-2);
  EXPECT_TRUE(std::isfinite(log.value_loss));
}

}  // namespace
}  // namespace navforge
