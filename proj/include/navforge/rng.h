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

#ifndef NAVFORGE_RNG_H_
#define NAVFORGE_RNG_H_

#include <array>
#include <cstdint>

namespace navforge {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Maps a 128-bit counter and a 64-bit key to 128 bits.
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// 64-bit mixing hash (splitmix64 finalizer), used to derive stream keys.
uint64_t mix64(uint64_t x);
uint64_t hash_combine(uint64_t seed, uint64_t value);

// Stream purposes. Each purpose draws from its own counter space so that
// enabling one consumer never shifts the numbers seen by another.
enum class StreamId : uint32_t {
  kGoals = 1,
  kRandomizationReset = 2,
  kRandomizationStep = 3,
  kRandomizationAction = 4,
  kRandomizationObservation = 5,
  kVelocityReference = 6,
  kPolicy = 7,
  kInit = 8,
  kShuffle = 9,
  kStart = 10,
};

// Counter-based random stream. The i-th draw is a pure function of
// (key, i): streams are reproducible regardless of the order in which
// environments are stepped.
class CounterRng {
 public:
  CounterRng() = default;
  explicit CounterRng(uint64_t key, uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  // Key for (global seed, environment, episode, purpose).
  static CounterRng for_stream(uint64_t global_seed, uint64_t env,
                               uint64_t episode, StreamId id);

  uint64_t next_u64();
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal (Box-Muller on two uniforms).
  double normal();
  // Normal truncated to mean +- 3 std by resampling.
  double truncated_normal(double mean, double stddev);
  int uniform_int(int lo, int hi_inclusive);

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

  friend bool operator==(const CounterRng&, const CounterRng&) = default;

 private:
  uint64_t key_ = 0;
  uint64_t counter_ = 0;
  // Second half of the last Philox block, handed out on odd draws.
  uint64_t spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace navforge

#endif  // NAVFORGE_RNG_H_
