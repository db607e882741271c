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

// Parallel kernels against their serial reference implementations.

#include <benchmark/benchmark.h>

#include <vector>

#include "navforge/env.h"
#include "navforge/nn.h"
#include "navforge/rng.h"

namespace navforge {
namespace {

std::vector<double> random_actions(const EnvBatch& env, uint64_t seed) {
  std::vector<double> a(size_t(env.num_envs()) * env.action_dim());
  CounterRng rng(seed);
  for (double& x : a) x = rng.uniform(-1, 1);
  return a;
}

EnvConfig bench_config(int robot, int num_envs) {
  static const char* kRobots[] = {"turtlebot2", "kingfisher", "floating_platform"};
  EnvConfig c;
  c.robot = kRobots[robot];
  c.task = "goto_position";
  c.num_envs = num_envs;
  return c;
}

template <bool kParallel>
void BM_EnvStep(benchmark::State& state) {
  EnvBatch env(bench_config(static_cast<int>(state.range(0)),
                            static_cast<int>(state.range(1))));
  const std::vector<double> a = random_actions(env, 1);
  for (auto _ : state) {
    StepResult r = kParallel ? env.step(a) : env.step_serial(a);
    benchmark::DoNotOptimize(r.reward.data());
  }
  state.SetItemsProcessed(state.iterations() * env.num_envs());
}
BENCHMARK(BM_EnvStep<true>)
    ->Name("EnvStep/parallel")
    ->ArgsProduct({{0, 1, 2}, {64, 1024, 4096}})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnvStep<false>)
    ->Name("EnvStep/serial")
    ->ArgsProduct({{0, 1, 2}, {64, 1024, 4096}})
    ->Unit(benchmark::kMicrosecond);

struct MlpFixture {
  Mlp<float> net;
  std::vector<float> params;
  MatrixX<float> x;

  MlpFixture(int hidden, int batch)
      : net({10, hidden, hidden, 2}, Activation::kTanh),
        params(net.num_params()),
        x(10, batch) {
    CounterRng rng(2);
    net.init(params, rng);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = float(rng.normal());
  }
};

void BM_MlpBatched(benchmark::State& state) {
  MlpFixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    MatrixX<float> y = f.net.forward(f.params, f.x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * f.x.cols());
}
BENCHMARK(BM_MlpBatched)
    ->Name("MlpForward/batched")
    ->ArgsProduct({{64, 128}, {256, 4096}})
    ->Unit(benchmark::kMicrosecond);

void BM_MlpSerial(benchmark::State& state) {
  MlpFixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::vector<float> col(10);
  for (auto _ : state) {
    for (int b = 0; b < f.x.cols(); ++b) {
      std::copy(f.x.col(b).data(), f.x.col(b).data() + 10, col.begin());
      std::vector<float> y = f.net.forward_serial(f.params, col);
      benchmark::DoNotOptimize(y.data());
    }
  }
  state.SetItemsProcessed(state.iterations() * f.x.cols());
}
BENCHMARK(BM_MlpSerial)
    ->Name("MlpForward/serial")
    ->ArgsProduct({{64, 128}, {256, 4096}})
    ->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace navforge

BENCHMARK_MAIN();
