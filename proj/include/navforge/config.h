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

#ifndef NAVFORGE_CONFIG_H_
#define NAVFORGE_CONFIG_H_

#include <string>

#include "json.hpp"
#include "navforge/env.h"
#include "navforge/metrics.h"
#include "navforge/ppo.h"
#include "navforge/randomization.h"
#include "navforge/robots.h"
#include "navforge/tasks.h"

namespace navforge {

using Json = nlohmann::ordered_json;

// Serialization of every configuration block. merge_json overlays the keys
// present in `j` onto `out`, leaving the others untouched; unknown keys and
// wrongly typed values throw ConfigError naming the offending path.
Json to_json(const RandomizationConfig& c);
Json to_json(const RobotSpec& s);
Json to_json(const RewardCoefficients& c);
Json to_json(const SuccessThresholds& t);
Json to_json(const TaskConfig& t);
Json to_json(const EnvConfig& c);
Json to_json(const PPOConfig& c);
Json to_json(const PolicySpec& p);
Json to_json(const MetricsConfig& m);
Json to_json(const TrainConfig& c);

void merge_json(const Json& j, RandomizationConfig& out,
                const std::string& path = "randomization");
void merge_json(const Json& j, RobotSpec& out,
                const std::string& path = "robot");
void merge_json(const Json& j, RewardCoefficients& out,
                const std::string& path = "coefficients");
void merge_json(const Json& j, SuccessThresholds& out,
                const std::string& path = "thresholds");
void merge_json(const Json& j, TaskConfig& out,
                const std::string& path = "task_params");
void merge_json(const Json& j, EnvConfig& out, const std::string& path = "env");
void merge_json(const Json& j, PPOConfig& out, const std::string& path = "ppo");
void merge_json(const Json& j, PolicySpec& out,
                const std::string& path = "policy");
void merge_json(const Json& j, MetricsConfig& out,
                const std::string& path = "metrics");
void merge_json(const Json& j, TrainConfig& out, const std::string& path = "");

// Throws ConfigError when the file is missing or not valid JSON.
Json load_json_file(const std::string& path);
// Pretty-printed, trailing newline. Throws ConfigError on I/O failure.
void write_json_file(const std::string& path, const Json& j);

}  // namespace navforge

#endif  // NAVFORGE_CONFIG_H_
