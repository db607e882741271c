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

#include "navforge/rng.h"

#include <cmath>

#include "navforge/planar.h"

namespace navforge {
namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

}  // namespace

std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                   std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t hash_combine(uint64_t seed, uint64_t value) {
  return mix64(seed ^ mix64(value + 0x632BE59BD9B4E019ull));
}

CounterRng CounterRng::for_stream(uint64_t global_seed, uint64_t env,
                                  uint64_t episode, StreamId id) {
  uint64_t k = mix64(global_seed);
  k = hash_combine(k, env);
  k = hash_combine(k, episode);
  k = hash_combine(k, static_cast<uint64_t>(id));
  return CounterRng(k);
}

uint64_t CounterRng::next_u64() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto out = philox4x32(
      {static_cast<uint32_t>(counter_), static_cast<uint32_t>(counter_ >> 32),
       0u, 0u},
      {static_cast<uint32_t>(key_), static_cast<uint32_t>(key_ >> 32)});
  ++counter_;
  spare_ = (static_cast<uint64_t>(out[3]) << 32) | out[2];
  has_spare_ = true;
  return (static_cast<uint64_t>(out[1]) << 32) | out[0];
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double CounterRng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double CounterRng::truncated_normal(double mean, double stddev) {
  for (;;) {
    const double z = normal();
    if (std::abs(z) <= 3.0) return mean + stddev * z;
  }
}

int CounterRng::uniform_int(int lo, int hi_inclusive) {
  const uint64_t span = static_cast<uint64_t>(hi_inclusive - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

}  // namespace navforge
