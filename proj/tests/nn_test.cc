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

#include "navforge/nn.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace navforge {
namespace {

class MlpActivations : public ::testing::TestWithParam<Activation> {};

TEST_P(MlpActivations, BatchedMatchesSerial) {
  const Mlp<double> net({5, 16, 16, 3}, GetParam());
  std::vector<double> p(net.num_params());
  CounterRng rng(1);
  net.init(p, rng);
  MatrixX<double> x(5, 40);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-2, 2);
  const MatrixX<double> y = net.forward(p, x);
  for (int b = 0; b < 40; ++b) {
    std::vector<double> col(x.col(b).data(), x.col(b).data() + 5);
    const auto ys = net.forward_serial(p, col);
    for (int k = 0; k < 3; ++k) ASSERT_NEAR(y(k, b), ys[k], 1e-12);
  }
}

TEST_P(MlpActivations, BackwardMatchesFiniteDifferences) {
  const Mlp<double> net({3, 6, 4, 2}, GetParam());
  std::vector<double> p(net.num_params());
  CounterRng rng(2);
  net.init(p, rng);
  MatrixX<double> x(3, 5);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
  MatrixX<double> w(2, 5);
  for (int i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-1, 1);
  // loss = sum(w .* f(x))
  auto loss = [&](const std::vector<double>& q) {
    return (net.forward(q, x).array() * w.array()).sum();
  };
  Mlp<double>::Tape tape;
  net.forward(p, x, &tape);
  std::vector<double> grad(p.size(), 0.0);
  const MatrixX<double> dx = net.backward(p, tape, w, grad);
  const double h = 1e-6;
  for (size_t k = 0; k < p.size(); ++k) {
    std::vector<double> hi = p, lo = p;
    hi[k] += h;
    lo[k] -= h;
    const double fd = (loss(hi) - loss(lo)) / (2 * h);
    // ReLU kinks make a few coordinates non-differentiable; they are
    // vanishingly unlikely at random inputs.
    ASSERT_NEAR(grad[k], fd, 1e-6) << k;
  }
  for (int i = 0; i < x.size(); ++i) {
    MatrixX<double> xh = x, xl = x;
    xh.data()[i] += h;
    xl.data()[i] -= h;
    const double fd = ((net.forward(p, xh).array() * w.array()).sum() -
                       (net.forward(p, xl).array() * w.array()).sum()) /
                      (2 * h);
    ASSERT_NEAR(dx.data()[i], fd, 1e-6);
  }
}

INSTANTIATE_TEST_SUITE_P(All, MlpActivations,
                         ::testing::Values(Activation::kTanh, Activation::kRelu,
                                           Activation::kElu));

TEST(Mlp, LayoutAndInitBounds) {
  const Mlp<float> net({4, 8, 2}, Activation::kTanh);
  EXPECT_EQ(net.num_params(), 4 * 8 + 8 + 8 * 2 + 2);
  EXPECT_EQ(net.weight_offset(0), 0);
  EXPECT_EQ(net.bias_offset(0), 32);
  EXPECT_EQ(net.weight_offset(1), 40);
  std::vector<float> p(net.num_params());
  CounterRng rng(3);
  net.init(p, rng);
  for (int k = 0; k < 40; ++k) ASSERT_LE(std::abs(p[k]), 0.5f);
  for (int k = 40; k < net.num_params(); ++k) {
    ASSERT_LE(std::abs(p[k]), float(1.0 / std::sqrt(8.0)));
  }
}

TEST(Mlp, FloatBatchedCloseToSerial) {
  const Mlp<float> net({8, 64, 64, 2}, Activation::kTanh);
  std::vector<float> p(net.num_params());
  CounterRng rng(4);
  net.init(p, rng);
  MatrixX<float> x(8, 16);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = float(rng.uniform(-3, 3));
  const MatrixX<float> y = net.forward(p, x);
  for (int b = 0; b < 16; ++b) {
    std::vector<float> col(x.col(b).data(), x.col(b).data() + 8);
    const auto ys = net.forward_serial(p, col);
    for (int k = 0; k < 2; ++k) ASSERT_NEAR(y(k, b), ys[k], 1e-5f);
  }
}

TEST(Mlp, ResultsDoNotDependOnBufferAlignment) {
  const Mlp<float> net({10, 64, 64, 3}, Activation::kTanh);
  std::vector<float> base(net.num_params());
  CounterRng rng(13);
  net.init(base, rng);
  MatrixX<float> x(10, 5);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = float(rng.normal());
  MatrixX<float> g_out(3, 5);
  for (int i = 0; i < g_out.size(); ++i) g_out.data()[i] = float(rng.normal());

  MatrixX<float> y_ref;
  std::vector<float> g_ref;
  for (int shift = 0; shift < 16; ++shift) {
    std::vector<float> storage(net.num_params() + shift);
    std::copy(base.begin(), base.end(), storage.begin() + shift);
    const std::span<const float> p(storage.data() + shift, net.num_params());
    std::vector<float> gstore(net.num_params() + shift, 0.0f);
    const std::span<float> g(gstore.data() + shift, net.num_params());
    Mlp<float>::Tape tape;
    const MatrixX<float> y = net.forward(p, x, &tape);
    net.backward(p, tape, g_out, g);
    if (shift == 0) {
      y_ref = y;
      g_ref.assign(g.begin(), g.end());
      continue;
    }
    ASSERT_TRUE(y == y_ref) << "shift " << shift;
    ASSERT_TRUE(std::equal(g.begin(), g.end(), g_ref.begin())) << "shift " << shift;
  }
}

TEST(Mlp, Errors) {
  EXPECT_THROW(Mlp<float>({3}, Activation::kTanh), ConfigError);
  EXPECT_THROW(Mlp<float>({3, 0, 1}, Activation::kTanh), ConfigError);
  const Mlp<float> net({2, 2}, Activation::kTanh);
  std::vector<float> p(5);
  EXPECT_THROW(net.forward(p, MatrixX<float>(2, 1)), ContractError);
  std::vector<float> ok(6);
  EXPECT_THROW(net.forward(ok, MatrixX<float>(3, 1)), ContractError);
  EXPECT_THROW(parse_activation("gelu"), ConfigError);
  EXPECT_EQ(parse_activation(to_string(Activation::kElu)), Activation::kElu);
}

}  // namespace
}  // namespace navforge
