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

#ifndef NAVFORGE_NN_H_
#define NAVFORGE_NN_H_

#include <Eigen/Core>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "navforge/errors.h"
#include "navforge/rng.h"

namespace navforge {

enum class Activation { kTanh, kRelu, kElu };

std::string to_string(Activation a);
// Throws ConfigError for unknown names.
Activation parse_activation(const std::string& name);

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Fully connected network whose parameters live in an external flat buffer.
// Layer l stores its weight as an (out x in) column-major block followed by
// its bias. Samples are columns.
template <class Scalar>
class Mlp {
 public:
  Mlp() = default;
  // sizes = {in, hidden..., out}; the output layer is linear.
  Mlp(std::vector<int> sizes, Activation act)
      : sizes_(std::move(sizes)), act_(act) {
    if (sizes_.size() < 2) throw ConfigError("Mlp needs at least two sizes");
    for (int s : sizes_) {
      if (s < 1) throw ConfigError("Mlp layer sizes must be >= 1");
    }
    int offset = 0;
    for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
      weight_offset_.push_back(offset);
      offset += sizes_[l + 1] * sizes_[l];
      bias_offset_.push_back(offset);
      offset += sizes_[l + 1];
    }
    num_params_ = offset;
  }

  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  int num_params() const { return num_params_; }
  int in_dim() const { return sizes_.front(); }
  int out_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  Activation activation() const { return act_; }
  int weight_offset(int l) const { return weight_offset_[l]; }
  int bias_offset(int l) const { return bias_offset_[l]; }

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void init(std::span<Scalar> params, CounterRng& rng) const {
    check(params.size());
    for (int l = 0; l < num_layers(); ++l) {
      const double bound = 1.0 / std::sqrt(double(sizes_[l]));
      const int n = sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
      for (int k = 0; k < n; ++k) {
        params[weight_offset_[l] + k] = Scalar(rng.uniform(-bound, bound));
      }
    }
  }

  // Cached activations of a batched forward pass, reused by backward.
  struct Tape {
    std::vector<MatrixX<Scalar>> z;  // pre-activations per layer
    std::vector<MatrixX<Scalar>> a;  // a[0] = input, a[l+1] = layer output
  };

  // Batched forward; x is (in x batch).
  MatrixX<Scalar> forward(std::span<const Scalar> params,
                          const MatrixX<Scalar>& x, Tape* tape = nullptr) const {
    check(params.size());
    if (x.rows() != in_dim()) throw ContractError("Mlp: input has wrong rows");
    MatrixX<Scalar> h = x;
    if (tape) {
      tape->z.assign(num_layers(), {});
      tape->a.assign(num_layers() + 1, {});
      tape->a[0] = x;
    }
    for (int l = 0; l < num_layers(); ++l) {
      MatrixX<Scalar> z = weight(params, l) * h;
      z.colwise() += bias(params, l);
      if (l + 1 < num_layers()) {
        h = apply(z);
      } else {
        h = z;
      }
      if (tape) {
        tape->z[l] = std::move(z);
        tape->a[l + 1] = h;
      }
    }
    return h;
  }

  // Backward through a taped forward. grad_out is (out x batch); gradients
  // are accumulated into grad. Returns d loss / d input.
  MatrixX<Scalar> backward(std::span<const Scalar> params, const Tape& tape,
                           const MatrixX<Scalar>& grad_out,
                           std::span<Scalar> grad) const {
    check(params.size());
    check(grad.size());
    MatrixX<Scalar> delta = grad_out;
    for (int l = num_layers() - 1; l >= 0; --l) {
      if (l + 1 < num_layers()) {
        delta.array() *= derivative(tape.z[l], tape.a[l + 1]).array();
      }
      Eigen::Map<MatrixX<Scalar>> gw(grad.data() + weight_offset_[l],
                                     sizes_[l + 1], sizes_[l]);
      Eigen::Map<VectorX<Scalar>> gb(grad.data() + bias_offset_[l],
                                     sizes_[l + 1]);
      const MatrixX<Scalar> dw = delta * tape.a[l].transpose();
      const VectorX<Scalar> db = delta.rowwise().sum();
      gw += dw;
      gb += db;
      delta = weight(params, l).transpose() * delta;
    }
    return delta;
  }

  // Scalar loop reference of forward for a single sample.
  std::vector<Scalar> forward_serial(std::span<const Scalar> params,
                                     std::span<const Scalar> x) const {
    check(params.size());
    if (static_cast<int>(x.size()) != in_dim()) {
      throw ContractError("Mlp: input has wrong size");
    }
    std::vector<Scalar> h(x.begin(), x.end());
    for (int l = 0; l < num_layers(); ++l) {
      const int in = sizes_[l];
      const int out = sizes_[l + 1];
      std::vector<Scalar> next(out);
      for (int o = 0; o < out; ++o) {
        Scalar acc = params[bias_offset_[l] + o];
        for (int i = 0; i < in; ++i) {
          acc += params[weight_offset_[l] + i * out + o] * h[i];
        }
        next[o] = l + 1 < num_layers() ? apply_scalar(acc) : acc;
      }
      h = std::move(next);
    }
    return h;
  }

 private:
  void check(size_t n) const {
    if (static_cast<int>(n) != num_params_) {
      throw ContractError("Mlp: parameter span has wrong size");
    }
  }

  // Copies into owned (aligned) storage: Eigen's vectorized kernels pick
  // their peeling from the pointer alignment, so mapping the flat buffer
  // directly would make results depend on where it was allocated.
  MatrixX<Scalar> weight(std::span<const Scalar> p, int l) const {
    return Eigen::Map<const MatrixX<Scalar>>(p.data() + weight_offset_[l],
                                             sizes_[l + 1], sizes_[l]);
  }
  VectorX<Scalar> bias(std::span<const Scalar> p, int l) const {
    return Eigen::Map<const VectorX<Scalar>>(p.data() + bias_offset_[l],
                                             sizes_[l + 1]);
  }

  Scalar apply_scalar(Scalar z) const {
    switch (act_) {
      case Activation::kTanh: return std::tanh(z);
      case Activation::kRelu: return z > Scalar(0) ? z : Scalar(0);
      case Activation::kElu: return z > Scalar(0) ? z : std::expm1(z);
    }
    return z;
  }

  MatrixX<Scalar> apply(const MatrixX<Scalar>& z) const {
    switch (act_) {
      case Activation::kTanh: return z.array().tanh().matrix();
      case Activation::kRelu: return z.array().max(Scalar(0)).matrix();
      case Activation::kElu:
        return z.unaryExpr([](Scalar v) {
          return v > Scalar(0) ? v : Scalar(std::expm1(v));
        });
    }
    return z;
  }

  // d act / d z, written in terms of the output where that is cheaper.
  MatrixX<Scalar> derivative(const MatrixX<Scalar>& z,
                             const MatrixX<Scalar>& a) const {
    switch (act_) {
      case Activation::kTanh:
        return (Scalar(1) - a.array().square()).matrix();
      case Activation::kRelu:
        return (z.array() > Scalar(0)).template cast<Scalar>().matrix();
      case Activation::kElu:
        return z.binaryExpr(a, [](Scalar zv, Scalar av) {
          return zv > Scalar(0) ? Scalar(1) : av + Scalar(1);
        });
    }
    return z;
  }

  std::vector<int> sizes_;
  Activation act_ = Activation::kTanh;
  std::vector<int> weight_offset_;
  std::vector<int> bias_offset_;
  int num_params_ = 0;
};

}  // namespace navforge

#endif  // NAVFORGE_NN_H_
