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

#ifndef NAVFORGE_CHECKPOINT_H_
#define NAVFORGE_CHECKPOINT_H_

#include <string>

#include "navforge/config.h"
#include "navforge/ppo.h"

namespace navforge {

// File layout:
//   8 bytes  magic "NVFGCKPT"
//   u32      format version
//   u32      header length n
//   n bytes  JSON header: config echo, tensor directory (name, shape, dtype,
//            byte offset), standardizer statistics, training state and an
//            FNV-1a checksum of the tensor block
//   ...      tensor block, little-endian float32
inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Json config;          // TrainConfig echo
  Json training_state;  // epoch, lr, seed, ...
  Agent agent;
};

void save_checkpoint(const std::string& path, const Agent& agent,
                     const Json& config, const Json& training_state);

// Throws FormatError with a diagnostic on any inconsistency.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace navforge

#endif  // NAVFORGE_CHECKPOINT_H_
