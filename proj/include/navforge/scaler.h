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

#ifndef NAVFORGE_SCALER_H_
#define NAVFORGE_SCALER_H_

#include <span>
#include <vector>

namespace navforge {

// Running mean/variance standardizer with output clipping. Starts from a
// pseudo-count of one at mean 0, variance 1; batches are merged with the
// parallel (Chan et al.) update using the unbiased batch variance.
class RunningScaler {
 public:
  RunningScaler() = default;
  explicit RunningScaler(int dim, double clip = 5.0, double epsilon = 1e-8);

  int dim() const { return static_cast<int>(mean_.size()); }
  double count() const { return count_; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& variance() const { return variance_; }
  double clip() const { return clip_; }
  double epsilon() const { return epsilon_; }

  // data holds `rows` samples of dim() values, row-major.
  void update(std::span<const double> data, int rows);

  double normalize(double x, int d) const;
  double inverse(double y, int d) const;
  // In-place over row-major samples.
  void normalize(std::span<double> data) const;

  // Restores saved statistics; throws ContractError on size mismatch.
  void set_state(double count, std::vector<double> mean,
                 std::vector<double> variance);

  friend bool operator==(const RunningScaler&, const RunningScaler&) = default;

 private:
  std::vector<double> mean_;
  std::vector<double> variance_;
  double count_ = 1.0;
  double clip_ = 5.0;
  double epsilon_ = 1e-8;
};

}  // namespace navforge

#endif  // NAVFORGE_SCALER_H_
