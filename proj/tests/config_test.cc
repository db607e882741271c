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

#include "navforge/config.h"

#include <gtest/gtest.h>

#include <string>

#include "navforge/errors.h"

namespace navforge {
namespace {

const std::string kConfigs = std::string(NAVFORGE_SOURCE_DIR) + "/configs/";

TEST(ShippedConfigs, RobotsMatchBuiltInDefaults) {
  for (const std::string& name : robot_names()) {
    const Json file = load_json_file(kConfigs + "robots/" + name + ".json");
    EXPECT_EQ(file, to_json(default_robot_spec(name))) << name;
  }
}

TEST(ShippedConfigs, TaskTablesMatchBuiltInDefaults) {
  EXPECT_EQ(load_json_file(kConfigs + "tasks/reward_coefficients.json"),
            to_json(RewardCoefficients{}));
  EXPECT_EQ(load_json_file(kConfigs + "tasks/success_thresholds.json"),
            to_json(SuccessThresholds{}));
}

TEST(ShippedConfigs, TrainingDefaultsMatch) {
  const Json file = load_json_file(kConfigs + "train/default.json");
  EXPECT_EQ(file, to_json(TrainConfig{}));
  TrainConfig merged;
  merged.epochs = 1;
  merged.ppo.lr = 1.0;
  merge_json(file, merged);
  EXPECT_EQ(to_json(merged), to_json(TrainConfig{}));
}

TEST(ConfigJson, RoundTrips) {
  PPOConfig ppo;
  ppo.lr = 1e-3;
  ppo.entropy_coef = 0.01;
  PPOConfig ppo2;
  merge_json(to_json(ppo), ppo2);
  EXPECT_EQ(ppo, ppo2);

  PolicySpec ps;
  ps.hidden_layers = {64, 32, 16};
  ps.head = HeadKind::kBernoulli;
  PolicySpec ps2;
  merge_json(to_json(ps), ps2);
  EXPECT_EQ(ps, ps2);

  for (const std::string& name : robot_names()) {
    RobotSpec s = default_robot_spec(name);
    s.mass_props.mass *= 1.5;
    RobotSpec t = default_robot_spec("turtlebot2");
    merge_json(to_json(s), t);
    EXPECT_EQ(to_json(t), to_json(s)) << name;
  }

  EnvConfig ec;
  ec.robot = "kingfisher";
  ec.task = "track_velocities";
  ec.arena = ArenaSpec{50.0, 10.0};
  ec.randomization = no_randomization();
  ec.compatibility = {{"kingfisher", "goto_pose", true}};
  EnvConfig ec2;
  merge_json(to_json(ec), ec2);
  EXPECT_EQ(to_json(ec2), to_json(ec));
  EXPECT_EQ(ec2.compatibility, ec.compatibility);
}

TEST(ConfigJson, PartialOverlayKeepsOtherFields) {
  TrainConfig c;
  merge_json(Json::parse(R"({"ppo": {"lr": 0.001}, "env": {"num_envs": 64}})"), c);
  EXPECT_EQ(c.ppo.lr, 1e-3);
  EXPECT_EQ(c.env.num_envs, 64);
  EXPECT_EQ(c.ppo.epochs, 8);
  EXPECT_EQ(c.env.robot, "turtlebot2");
}

TEST(ConfigJson, ErrorsNameThePath) {
  TrainConfig c;
  try {
    merge_json(Json::parse(R"({"ppo": {"lrr": 0.001}})"), c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("ppo.lrr"), std::string::npos) << e.what();
  }
  try {
    merge_json(Json::parse(R"({"env": {"num_envs": "many"}})"), c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("env.num_envs"), std::string::npos)
        << e.what();
  }
  EXPECT_THROW(merge_json(Json::parse(R"({"env": 3})"), c), ConfigError);
  EXPECT_THROW(load_json_file(kConfigs + "does_not_exist.json"), ConfigError);
}

}  // namespace
}  // namespace navforge
