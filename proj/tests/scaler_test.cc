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

#include "navforge/scaler.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "navforge/errors.h"
#include "navforge/rng.h"

namespace navforge {
namespace {

TEST(RunningScaler, ConvergesWithinThreeStandardErrors) {
  const double mu = 3.0, sigma = 2.0;
  RunningScaler s(1);
  CounterRng rng(1);
  int seen = 0;
  for (int batch = 0; batch < 100; ++batch) {
    std::vector<double> x(1000);
    for (double& v : x) v = mu + sigma * rng.normal();
    s.update(x, 1000);
    seen += 1000;
  }
  const double n = seen;
  EXPECT_NEAR(s.mean()[0], mu, 3.0 * sigma / std::sqrt(n));
  // Standard error of the sample std is about sigma / sqrt(2 n).
  EXPECT_NEAR(std::sqrt(s.variance()[0]), sigma, 3.0 * sigma / std::sqrt(2 * n));
}

TEST(RunningScaler, MatchesTwoPassOracle) {
  // Prior pseudo-sample: one observation at mean 0 with variance 1.
  RunningScaler s(2);
  CounterRng rng(2);
  std::vector<double> all;
  for (int b = 0; b < 5; ++b) {
    const int rows = 3 + b;
    std::vector<double> x(rows * 2);
    for (double& v : x) v = rng.uniform(-4, 9);
    s.update(x, rows);
    all.insert(all.end(), x.begin(), x.end());
  }
  // Chan's merge with unbiased batch variances reproduces this closed form.
  const int rows = static_cast<int>(all.size() / 2);
  for (int d = 0; d < 2; ++d) {
    double count = 1.0, mean = 0.0, var = 1.0;
    size_t off = 0;
    for (int b = 0; b < 5; ++b) {
      const int r = 3 + b;
      double m = 0.0;
      for (int i = 0; i < r; ++i) m += all[(off + i) * 2 + d];
      m /= r;
      double sq = 0.0;
      for (int i = 0; i < r; ++i) {
        const double e = all[(off + i) * 2 + d] - m;
        sq += e * e;
      }
      const double bv = sq / (r - 1);
      const double tot = count + r;
      const double delta = m - mean;
      var = (var * count + bv * r + delta * delta * count * r / tot) / tot;
      mean += delta * r / tot;
      count = tot;
      off += r;
    }
    EXPECT_NEAR(s.mean()[d], mean, 1e-12);
    EXPECT_NEAR(s.variance()[d], var, 1e-12);
  }
  EXPECT_EQ(s.count(), 1.0 + rows);
}

TEST(RunningScaler, NormalizeClipsAndInverts) {
  RunningScaler s(1, 5.0);
  s.set_state(10.0, {2.0}, {4.0});
  EXPECT_NEAR(s.normalize(4.0, 0), 1.0, 1e-8);
  EXPECT_EQ(s.normalize(1000.0, 0), 5.0);
  EXPECT_EQ(s.normalize(-1000.0, 0), -5.0);
  EXPECT_NEAR(s.inverse(1.0, 0), 4.0, 1e-12);
  EXPECT_NEAR(s.inverse(s.normalize(3.3, 0), 0), 3.3, 1e-7);
  EXPECT_EQ(s.inverse(100.0, 0), 2.0 + 2.0 * 5.0);
}

TEST(RunningScaler, Errors) {
  RunningScaler s(3);
  EXPECT_THROW(s.update(std::vector<double>(5), 2), ContractError);
  std::vector<double> bad(4);
  EXPECT_THROW(s.normalize(bad), ContractError);
  EXPECT_THROW(s.set_state(1.0, {0.0}, {1.0}), ContractError);
}

}  // namespace
}  // namespace navforge
