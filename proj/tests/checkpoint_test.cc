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

#include "navforge/checkpoint.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "navforge/errors.h"

namespace navforge {
namespace {

namespace fs = std::filesystem;

class CheckpointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("navforge_ckpt_" + std::to_string(::testing::UnitTest::GetInstance()
                                                  ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    path_ = (dir_ / "policy.ckpt").string();
  }
  void TearDown() override { fs::remove_all(dir_); }

  Agent trained_agent(const std::string& robot) {
    PolicySpec ps;
    ps.hidden_layers = {12, 7};
    Agent a = Agent::create(ps, default_robot_spec(robot), 10, 3);
    CounterRng rng(6);
    for (float& p : a.model.params()) p += float(rng.uniform(-0.1, 0.1));
    std::vector<double> obs(5 * 10), val(5);
    for (double& o : obs) o = rng.normal();
    for (double& v : val) v = rng.uniform(0, 20);
    a.obs_scaler.update(obs, 5);
    a.value_scaler.update(val, 5);
    return a;
  }

  std::string read_all() {
    std::ifstream in(path_, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  }
  void write_all(const std::string& s) {
    std::ofstream out(path_, std::ios::binary);
    out.write(s.data(), s.size());
  }

  fs::path dir_;
  std::string path_;
};

TEST_F(CheckpointTest, RoundTripIsExact) {
  for (const char* robot : {"turtlebot2", "floating_platform"}) {
    const Agent a = trained_agent(robot);
    const Json cfg = {{"env", {{"robot", robot}}}};
    const Json state = {{"epoch", 17}, {"lr", 3e-4}};
    save_checkpoint(path_, a, cfg, state);
    const Checkpoint ck = load_checkpoint(path_);
    EXPECT_EQ(ck.agent.model.params(), a.model.params());
    EXPECT_EQ(ck.agent.model.spec(), a.model.spec());
    EXPECT_EQ(ck.agent.obs_scaler, a.obs_scaler);
    EXPECT_EQ(ck.agent.value_scaler, a.value_scaler);
    EXPECT_EQ(ck.config, cfg);
    EXPECT_EQ(ck.training_state, state);
  }
}

TEST_F(CheckpointTest, FlippedTensorByteIsChecksumError) {
  save_checkpoint(path_, trained_agent("kingfisher"), Json::object(), Json::object());
  std::string blob = read_all();
  blob[blob.size() - 3] ^= 0x10;
  write_all(blob);
  try {
    load_checkpoint(path_);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos);
  }
}

TEST_F(CheckpointTest, StructuralCorruption) {
  save_checkpoint(path_, trained_agent("turtlebot2"), Json::object(), Json::object());
  const std::string good = read_all();

  write_all("NOTACKPT" + good.substr(8));
  EXPECT_THROW(load_checkpoint(path_), FormatError);

  write_all(good.substr(0, good.size() - 4));
  EXPECT_THROW(load_checkpoint(path_), FormatError);

  write_all(good.substr(0, 40));
  EXPECT_THROW(load_checkpoint(path_), FormatError);

  std::string bad_version = good;
  bad_version[8] = 9;
  write_all(bad_version);
  EXPECT_THROW(load_checkpoint(path_), FormatError);

  std::string bad_json = good;
  bad_json[16] = '#';
  write_all(bad_json);
  EXPECT_THROW(load_checkpoint(path_), FormatError);

  write_all("");
  EXPECT_THROW(load_checkpoint(path_), FormatError);
  EXPECT_THROW(load_checkpoint((dir_ / "missing.ckpt").string()), FormatError);
}

TEST_F(CheckpointTest, LoadedAgentActsIdentically) {
  const Agent a = trained_agent("turtlebot2");
  save_checkpoint(path_, a, Json::object(), Json::object());
  const Agent b = load_checkpoint(path_).agent;
  std::vector<double> obs(4 * 10);
  CounterRng rng(1);
  for (double& o : obs) o = rng.normal();
  const ActOutput x = act(a, obs, 4, {});
  const ActOutput y = act(b, obs, 4, {});
  EXPECT_EQ(x.actions, y.actions);
  EXPECT_EQ(x.values, y.values);
}

}  // namespace
}  // namespace navforge
