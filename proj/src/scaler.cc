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

#include <algorithm>
#include <cmath>

#include "navforge/errors.h"

namespace navforge {

RunningScaler::RunningScaler(int dim, double clip, double epsilon)
    : mean_(dim, 0.0), variance_(dim, 1.0), clip_(clip), epsilon_(epsilon) {
  if (dim < 0) throw ContractError("RunningScaler: negative dim");
}

void RunningScaler::update(std::span<const double> data, int rows) {
  const int d = dim();
  if (rows < 1 || data.size() != size_t(rows) * d) {
    throw ContractError("RunningScaler::update: data size mismatch");
  }
  const double n = rows;
  const double total = count_ + n;
  for (int j = 0; j < d; ++j) {
    double sum = 0.0;
    for (int r = 0; r < rows; ++r) sum += data[size_t(r) * d + j];
    const double batch_mean = sum / n;
    double sq = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double e = data[size_t(r) * d + j] - batch_mean;
      sq += e * e;
    }
    const double batch_var = rows > 1 ? sq / (n - 1.0) : 0.0;
    const double delta = batch_mean - mean_[j];
    const double m2 = variance_[j] * count_ + batch_var * n +
                      delta * delta * count_ * n / total;
    mean_[j] += delta * n / total;
    variance_[j] = m2 / total;
  }
  count_ = total;
}

double RunningScaler::normalize(double x, int d) const {
  const double y = (x - mean_[d]) / (std::sqrt(variance_[d]) + epsilon_);
  return std::clamp(y, -clip_, clip_);
}

double RunningScaler::inverse(double y, int d) const {
  return std::sqrt(variance_[d]) * std::clamp(y, -clip_, clip_) + mean_[d];
}

void RunningScaler::normalize(std::span<double> data) const {
  const int d = dim();
  if (d == 0 || data.size() % d != 0) {
    throw ContractError("RunningScaler::normalize: data size mismatch");
  }
  for (size_t k = 0; k < data.size(); ++k) {
    data[k] = normalize(data[k], static_cast<int>(k % d));
  }
}

void RunningScaler::set_state(double count, std::vector<double> mean,
                              std::vector<double> variance) {
  if (mean.size() != variance.size() || static_cast<int>(mean.size()) != dim()) {
    throw ContractError("RunningScaler::set_state: size mismatch");
  }
  count_ = count;
  mean_ = std::move(mean);
  variance_ = std::move(variance);
}

}  // namespace navforge
