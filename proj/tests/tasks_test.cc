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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "navforge/errors.h"

namespace navforge {
namespace {

TaskConfig config_for(TaskKind kind) {
  TaskConfig c;
  c.kind = kind;
  c.arena = default_arena(kind);
  return c;
}

PlanarState at(double x, double y, double yaw, Twist2 tw = {}) {
  PlanarState s;
  s.pose = {x, y, yaw};
  s.twist = tw;
  return s;
}

TaskState single_goal(double x, double y, double yaw = 0.0) {
  TaskState ts;
  ts.goals = {Pose2{x, y, yaw}};
  return ts;
}

std::vector<double> observe(const Task& task, const PlanarState& s,
                            const TaskState& ts, int action_dim = 2) {
  std::vector<double> out(task.observation_dim(action_dim));
  task.build_observation(s, ts, ActionVec(action_dim), out);
  return out;
}

TEST(Tasks, RegistryAndUnknownName) {
  EXPECT_EQ(task_names().size(), 5u);
  for (const auto& n : task_names()) {
    EXPECT_EQ(to_string(parse_task_kind(n)), n);
  }
  EXPECT_THROW(parse_task_kind("goto_moon"), RegistryError);
  EXPECT_THROW(make_task("goto_moon", TaskConfig{}), RegistryError);
}

TEST(Tasks, ObservationDimensions) {
  const auto dim = [](TaskKind k, int a) {
    return make_task(config_for(k))->observation_dim(a);
  };
  EXPECT_EQ(dim(TaskKind::kGoToPosition, 2), 6 + 2);
  EXPECT_EQ(dim(TaskKind::kGoToPose, 8), 8 + 8);
  EXPECT_EQ(dim(TaskKind::kGoThroughPositions, 2), 9 + 2);
  EXPECT_EQ(dim(TaskKind::kTrackVelocities, 2), 6 + 2);
  EXPECT_EQ(dim(TaskKind::kGoToPositionObstacles, 2), 6 + 2 + 6);
  TaskConfig c = config_for(TaskKind::kGoThroughPositions);
  c.future_goals = 3;
  EXPECT_EQ(make_task(c)->observation_dim(2), 6 + 9 + 2);
}

TEST(Tasks, AxisAlignedGoalBlock) {
  const auto task = make_task(config_for(TaskKind::kGoToPosition));
  const auto obs = observe(*task, at(0, 0, 0), single_goal(1, 0));
  EXPECT_EQ(obs[3], 1.0);
  EXPECT_EQ(obs[4], 1.0);
  EXPECT_EQ(obs[5], 0.0);
}

TEST(Tasks, QuarterTurnGoalBlock) {
  const auto task = make_task(config_for(TaskKind::kGoToPosition));
  const auto obs = observe(*task, at(0, 0, kPi / 2), single_goal(1, 0));
  EXPECT_NEAR(obs[3], 1.0, 1e-12);
  EXPECT_NEAR(obs[4], 0.0, 1e-12);
  EXPECT_NEAR(obs[5], -1.0, 1e-12);
}

TEST(Tasks, PreviousActionAppended) {
  const auto task = make_task(config_for(TaskKind::kGoToPosition));
  ActionVec a(2);
  a[0] = 0.25;
  a[1] = -0.5;
  std::vector<double> out(8);
  task->build_observation(at(0, 0, 0), single_goal(1, 1), a, out);
  EXPECT_EQ(out[6], 0.25);
  EXPECT_EQ(out[7], -0.5);
  std::vector<double> wrong(7);
  EXPECT_THROW(task->build_observation(at(0, 0, 0), single_goal(1, 1), a, wrong),
               ContractError);
  EXPECT_THROW(task->build_observation(at(0, 0, 0), TaskState{}, a, out),
               ContractError);
}

TEST(Tasks, TrackVelocitiesZeroErrorObservation) {
  const auto task = make_task(config_for(TaskKind::kTrackVelocities));
  TaskState ts;
  ts.velocity.v_ref = 0.3;
  ts.velocity.w_ref = -0.2;
  const auto obs = observe(*task, at(1, 2, 0.3, {0.3, 0.0, -0.2}), ts);
  const std::vector<double> want{0, 0, 0, 0.3, 0.0, -0.2};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(obs[i], want[i]) << i;
}

TEST(Tasks, GoToPositionRewardAtGoal) {
  const auto task = make_task(config_for(TaskKind::kGoToPosition));
  TaskState ts = single_goal(1, 2);
  const RewardResult r = task->compute_reward(at(1, 2, 0.4), ts, 0.0);
  EXPECT_NEAR(r.reward, 1.25, 1e-12);
  EXPECT_FALSE(r.boundary_exit);
}

TEST(Tasks, GoToPositionPositionTermAtOneMetre) {
  TaskConfig c = config_for(TaskKind::kGoToPosition);
  c.coefficients.goto_position.alpha_i2_head = 0.0;
  const auto task = make_task(c);
  TaskState ts = single_goal(1, 0);
  const RewardResult r = task->compute_reward(at(0, 0, 0), ts, 0.0);
  EXPECT_NEAR(r.reward, 0.3679, 1e-4);
  EXPECT_NEAR(r.reward, std::exp(-1.0), 1e-12);
}

TEST(Tasks, GoToPositionRewardOracle) {
  // Independent evaluation of the position-task reward at random states.
  const TaskConfig c = config_for(TaskKind::kGoToPosition);
  const auto task = make_task(c);
  CounterRng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const PlanarState s =
        at(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-3, 3),
           {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-3, 3)});
    TaskState ts = single_goal(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const double dx = ts.goals[0].x - s.pose.x;
    const double dy = ts.goals[0].y - s.pose.y;
    const double d = std::hypot(dx, dy);
    double bearing = std::atan2(dy, dx) - s.pose.yaw;
    bearing = std::atan2(std::sin(bearing), std::cos(bearing));
    const double v = std::min(1.0, std::hypot(s.twist.vx, s.twist.vy));
    const double w = std::min(2.0, std::abs(s.twist.omega));
    const double boundary =
        std::hypot(s.pose.x, s.pose.y) > 6.0 ? -10.0 : 0.0;
    const double want = std::exp(-d) + 0.25 * std::exp(-std::abs(bearing) / 0.25) -
                        0.05 * v - 0.1 * w + boundary - 0.01;
    ASSERT_NEAR(task->compute_reward(s, ts, -0.01).reward, want, 1e-9);
    ASSERT_NEAR(ts.prev_distance, d, 1e-12);
  }
}

TEST(Tasks, GoToPositionRewardDecreasesWithDistance) {
  const auto task = make_task(config_for(TaskKind::kGoToPosition));
  double prev = 1e9;
  for (int i = 0; i <= 500; ++i) {
    const double d = 0.01 * i;
    TaskState ts = single_goal(d, 0);
    const double r = task->compute_reward(at(0, 0, 0), ts, 0.0).reward;
    ASSERT_LT(r, prev);
    prev = r;
  }
}

TEST(Tasks, GoToPoseRewardOracle) {
  const auto task = make_task(config_for(TaskKind::kGoToPose));
  TaskState ts = single_goal(0.5, 0.0, 0.3);
  ts.prev_distance = 0.8;
  const PlanarState s = at(0, 0, 0.1, {0.4, 0.0, 0.2});
  const double want = std::exp(-0.5) * std::exp(-0.2 / 0.25) - 0.05 * 0.4 -
                      0.05 * 0.2 + 0.2 * (0.8 - 0.5);
  EXPECT_NEAR(task->compute_reward(s, ts, 0.0).reward, want, 1e-12);
}

TEST(Tasks, GoThroughPositionsProgressTerm) {
  TaskConfig c = config_for(TaskKind::kGoThroughPositions);
  c.coefficients.go_through_positions.phi_i2_head = 0.0;
  const auto task = make_task(c);
  TaskState ts;
  ts.goals = {Pose2{2, 0, 0}, Pose2{3, 0, 0}};
  ts.prev_distance = 2.0;
  const RewardResult r = task->compute_reward(at(0.3, 0, 0), ts, 0.0);
  EXPECT_NEAR(r.reward, 0.3, 1e-12);
  EXPECT_NEAR(ts.prev_distance, 1.7, 1e-12);
}

TEST(Tasks, GoThroughPositionsConsumesInOrder) {
  TaskConfig c = config_for(TaskKind::kGoThroughPositions);
  const auto task = make_task(c);
  TaskState ts;
  ts.goals = {Pose2{1, 0, 0}, Pose2{1.1, 0, 0}, Pose2{3, 0, 0}};
  ts.prev_distance = 1.0;
  // Standing near the second goal does not consume it out of order.
  task->compute_reward(at(1.1, 0.0, 0), ts, 0.0);
  EXPECT_EQ(ts.goals_reached, 2);  // first at 0.1 m, then second at 0 m
  EXPECT_EQ(ts.active_goal, 2);
  EXPECT_EQ(ts.consumed_this_step, 2);
  EXPECT_TRUE(task->get_dones(at(1.1, 0, 0), ts, 5, 300).success_event);

  TaskState far;
  far.goals = {Pose2{2, 0, 0}, Pose2{0.05, 0, 0}};
  far.prev_distance = 2.0;
  task->compute_reward(at(0, 0, 0), far, 0.0);
  EXPECT_EQ(far.goals_reached, 0);
}

TEST(Tasks, GoThroughPositionsAllConsumedEndsCleanly) {
  const auto task = make_task(config_for(TaskKind::kGoThroughPositions));
  TaskState ts;
  ts.goals = {Pose2{0.1, 0, 0}};
  ts.prev_distance = 0.1;
  task->compute_reward(at(0, 0, 0), ts, 0.0);
  const TaskDones d = task->get_dones(at(0, 0, 0), ts, 3, 300);
  EXPECT_TRUE(d.clean);
  EXPECT_FALSE(d.early);
}

TEST(Tasks, TrackVelocitiesZeroErrorContribution) {
  const auto task = make_task(config_for(TaskKind::kTrackVelocities));
  TaskState ts;
  ts.velocity.v_ref = 0.4;
  ts.velocity.w_ref = 0.1;
  EXPECT_EQ(task->compute_reward(at(0, 0, 0, {0.4, 0, 0.1}), ts, 0.0).reward,
            0.0);
  const double r = task->compute_reward(at(0, 0, 0, {0.1, 0, 0.3}), ts, 0.0).reward;
  EXPECT_NEAR(r, -1.0 * 0.3 - 0.5 * 0.2, 1e-12);
}

TEST(Tasks, SuccessThresholds) {
  const auto pos = make_task(config_for(TaskKind::kGoToPosition));
  EXPECT_TRUE(pos->get_dones(at(0, 0, 0), single_goal(0.05, 0), 3, 300).success_event);
  EXPECT_FALSE(pos->get_dones(at(0, 0, 0), single_goal(0.1, 0), 3, 300).success_event);

  const auto pose = make_task(config_for(TaskKind::kGoToPose));
  const double deg = kPi / 180.0;
  EXPECT_FALSE(pose->get_dones(at(0, 0, 0), single_goal(0.05, 0, 15 * deg), 3, 300)
                   .success_event);
  EXPECT_TRUE(pose->get_dones(at(0, 0, 0), single_goal(0.05, 0, 5 * deg), 3, 300)
                  .success_event);
}

TEST(Tasks, ArenaExitIsEarlyWithPenalty) {
  const auto task = make_task(config_for(TaskKind::kGoToPosition));
  TaskState ts = single_goal(0, 0);
  const PlanarState out = at(6.0 + 1e-6, 0, 0);
  EXPECT_TRUE(task->get_dones(out, ts, 0, 300).early);
  const RewardResult r = task->compute_reward(out, ts, 0.0);
  EXPECT_TRUE(r.boundary_exit);
  EXPECT_LT(r.reward, -8.0);
  EXPECT_FALSE(task->get_dones(at(5.9, 0, 0), ts, 0, 300).early);
}

TEST(Tasks, TimeoutIsClean) {
  const auto task = make_task(config_for(TaskKind::kGoToPosition));
  const TaskState ts = single_goal(1, 0);
  EXPECT_FALSE(task->get_dones(at(0, 0, 0), ts, 298, 300).clean);
  EXPECT_TRUE(task->get_dones(at(0, 0, 0), ts, 299, 300).clean);
}

TEST(Tasks, GoalSamplingDeterministicAndDiskUniform) {
  TaskConfig c = config_for(TaskKind::kGoToPosition);
  const auto task = make_task(c);
  CounterRng a(5), b(5);
  EXPECT_EQ(task->sample_goals(a, PlanarState{}).goals,
            task->sample_goals(b, PlanarState{}).goals);

  CounterRng rng(6);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Pose2 g = task->sample_goals(rng, PlanarState{}).goals[0];
    sum += std::hypot(g.x, g.y);
  }
  EXPECT_NEAR(sum / n, 2.0, 0.02 * 2.0);

  c.arena.spawn_radius = 0.0;
  CounterRng z(1);
  const Pose2 g = make_task(c)->sample_goals(z, PlanarState{}).goals[0];
  EXPECT_EQ(g.x, 0.0);
  EXPECT_EQ(g.y, 0.0);
}

TEST(Tasks, WaypointChainRespectsDistances) {
  const TaskConfig c = config_for(TaskKind::kGoThroughPositions);
  const auto task = make_task(c);
  CounterRng rng(2);
  for (int ep = 0; ep < 100; ++ep) {
    const TaskState ts = task->sample_goals(rng, PlanarState{});
    ASSERT_EQ(static_cast<int>(ts.goals.size()), c.num_waypoints);
    Vec2 from{0, 0};
    for (const Pose2& g : ts.goals) {
      const double d = norm(g.position() - from);
      ASSERT_GE(d, c.waypoint_distance.lo - 1e-12);
      ASSERT_LE(d, c.waypoint_distance.hi + 1e-12);
      ASSERT_LE(norm(g.position()), c.arena.radius - c.waypoint_margin + 1e-12);
      from = g.position();
    }
  }
}

TEST(Tasks, ObstaclesAreDisjointAndClearOfStartAndGoal) {
  const TaskConfig c = config_for(TaskKind::kGoToPositionObstacles);
  const auto task = make_task(c);
  CounterRng rng(3);
  for (int ep = 0; ep < 200; ++ep) {
    const TaskState ts = task->sample_goals(rng, PlanarState{});
    ASSERT_EQ(static_cast<int>(ts.obstacles.size()), c.num_obstacles);
    for (size_t i = 0; i < ts.obstacles.size(); ++i) {
      const Obstacle& o = ts.obstacles[i];
      ASSERT_GE(norm(o.center), o.radius + c.collision_radius);
      ASSERT_GE(norm(o.center - ts.goals[0].position()),
                o.radius + c.collision_radius);
      for (size_t j = i + 1; j < ts.obstacles.size(); ++j) {
        ASSERT_GE(norm(o.center - ts.obstacles[j].center),
                  o.radius + ts.obstacles[j].radius);
      }
    }
  }
}

TEST(Tasks, ObstacleBlockSortedByDistanceInBodyFrame) {
  const auto task = make_task(config_for(TaskKind::kGoToPositionObstacles));
  TaskState ts = single_goal(2, 2);
  ts.obstacles = {{{0, 3}, 0.3}, {{1, 0}, 0.3}, {{-2, 0}, 0.3}, {{0, -5}, 0.3}};
  const auto obs = observe(*task, at(0, 0, kPi / 2), ts);
  // Yaw pi/2 maps world (x, y) to body (y, -x).
  const std::vector<double> want{0, -1, -0, 2, 3, 0};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(obs[8 + i], want[i], 1e-12) << i;

  TaskState none = single_goal(2, 2);
  const auto padded = observe(*task, at(0, 0, 0), none);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(padded[8 + i], 0.0);
}

TEST(Tasks, CollisionEndsEpisodeWithPenalty) {
  const auto task = make_task(config_for(TaskKind::kGoToPositionObstacles));
  TaskState ts = single_goal(2, 2);
  ts.obstacles = {{{1, 0}, 0.3}};
  const PlanarState s = at(0.8, 0, 0);
  EXPECT_TRUE(task->get_dones(s, ts, 0, 300).early);
  const RewardResult r = task->compute_reward(s, ts, 0.0);
  EXPECT_TRUE(r.collision);
  EXPECT_LT(r.reward, -8.0);
}

TEST(Tasks, VelocityReference) {
  TaskConfig c = config_for(TaskKind::kTrackVelocities);
  c.velocity_bounds = {0.0, 0.3, 0.5};
  const auto task = make_task(c);
  CounterRng a(4), b(4);
  TaskState ta = task->sample_goals(a, PlanarState{});
  TaskState tb = task->sample_goals(b, PlanarState{});
  for (int i = 0; i < 10000; ++i) {
    const auto pa = task->advance_velocity_reference(ta, 0.1);
    const auto pb = task->advance_velocity_reference(tb, 0.1);
    ASSERT_EQ(pa, pb);
    ASSERT_LE(std::abs(pa.first), 0.3 + 1e-12);
    ASSERT_LE(std::abs(pa.second), 0.5 + 1e-12);
  }

  c.velocity_reference.constant_profile = true;
  const auto constant = make_task(c);
  CounterRng r(9);
  TaskState tc = constant->sample_goals(r, PlanarState{});
  const auto first = constant->advance_velocity_reference(tc, 0.1);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(constant->advance_velocity_reference(tc, 0.1), first);
  }

  const auto pos = make_task(config_for(TaskKind::kGoToPosition));
  TaskState ts = single_goal(1, 1);
  EXPECT_THROW(pos->advance_velocity_reference(ts, 0.1), ContractError);
}

TEST(Tasks, AnglePairsUnitNormAcrossRandomStates) {
  CounterRng rng(10);
  for (const auto& name : task_names()) {
    const TaskKind kind = parse_task_kind(name);
    const auto task = make_task(config_for(kind));
    for (int i = 0; i < 2000; ++i) {
      const PlanarState s =
          at(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi));
      CounterRng g(i);
      const TaskState ts = task->sample_goals(g, s);
      const auto obs = observe(*task, s, ts);
      for (auto [ci, si] : task->angle_pairs()) {
        ASSERT_NEAR(obs[ci] * obs[ci] + obs[si] * obs[si], 1.0, 1e-9) << name;
      }
    }
  }
}

TEST(Tasks, ConfigValidation) {
  TaskConfig c = config_for(TaskKind::kGoToPosition);
  c.thresholds.eps_p = 0.0;
  EXPECT_THROW(make_task(c), ConfigError);
  c = config_for(TaskKind::kGoToPosition);
  c.coefficients.decay.lambda1_dist = 0.0;
  EXPECT_THROW(make_task(c), ConfigError);
  c = config_for(TaskKind::kGoToPosition);
  c.arena.spawn_radius = 7.0;
  EXPECT_THROW(make_task(c), ConfigError);
}

}  // namespace
}  // namespace navforge
