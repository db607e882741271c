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

#ifndef NAVFORGE_ACTION_H_
#define NAVFORGE_ACTION_H_

#include <algorithm>
#include <array>
#include <cassert>
#include <span>

namespace navforge {

inline constexpr int kMaxActionDim = 8;

// Fixed-capacity action vector; per-env storage never allocates.
class ActionVec {
 public:
  ActionVec() = default;
  explicit ActionVec(int dim) : dim_(dim) { assert(dim <= kMaxActionDim); }
  explicit ActionVec(std::span<const double> values) : dim_(values.size()) {
    assert(values.size() <= kMaxActionDim);
    std::copy(values.begin(), values.end(), values_.begin());
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return values_[i]; }
  double operator[](int i) const { return values_[i]; }
  std::span<double> span() { return {values_.data(), size_t(dim_)}; }
  std::span<const double> span() const { return {values_.data(), size_t(dim_)}; }

  friend bool operator==(const ActionVec& a, const ActionVec& b) {
    return a.dim_ == b.dim_ &&
           std::equal(a.values_.begin(), a.values_.begin() + a.dim_,
                      b.values_.begin());
  }

 private:
  std::array<double, kMaxActionDim> values_{};
  int dim_ = 0;
};

}  // namespace navforge

#endif  // NAVFORGE_ACTION_H_
