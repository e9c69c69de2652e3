// Copyright 2026 The ATE Authors.
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

#ifndef ATE_PARAMETERS_H_
#define ATE_PARAMETERS_H_

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ate/tensor.h"

namespace ate {

// A named trainable tensor. `group` collects related tensors for reporting
// (gradient checks print one line per group). Regularized parameters take
// part in the L2 penalty; biases are not regularized.
struct Parameter {
  std::size_t id = 0;
  std::string name;
  std::string group;
  bool regularized = true;
  Tensor value;
};

// Owns every parameter of a model. Addresses are stable for the lifetime of
// the set, so model components hold plain Parameter pointers into it.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet &) = delete;
  ParameterSet &operator=(const ParameterSet &) = delete;
  ParameterSet(ParameterSet &&) = default;
  ParameterSet &operator=(ParameterSet &&) = default;

  Parameter &Add(std::string name, std::string group, Shape shape,
                 bool regularized);

  std::size_t size() const { return params_.size(); }
  Parameter &operator[](std::size_t id) { return *params_[id]; }
  const Parameter &operator[](std::size_t id) const { return *params_[id]; }

  // nullptr when absent.
  Parameter *Find(const std::string &name);
  const Parameter *Find(const std::string &name) const;

  // Total number of scalar entries over all (unique) parameters.
  std::size_t ScalarCount() const;

  std::vector<Tensor> Snapshot() const;
  void Restore(const std::vector<Tensor> &snapshot);

  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

// One gradient tensor per parameter id, shaped like the parameter.
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(const ParameterSet &params);

  void Zero();
  Tensor &operator[](std::size_t id) { return grads_[id]; }
  const Tensor &operator[](std::size_t id) const { return grads_[id]; }
  std::size_t size() const { return grads_.size(); }

  double GlobalNorm() const;
  bool AllFinite() const;

  auto begin() { return grads_.begin(); }
  auto end() { return grads_.end(); }

 private:
  std::vector<Tensor> grads_;
};

using Rng = std::mt19937_64;

// Uniform fill in [-limit, +limit].
void InitUniform(Tensor &t, double limit, Rng &rng);
// Uniform fill in +-sqrt(6 / (fan_in + fan_out)) for a rank-2 tensor.
void InitGlorot(Tensor &t, Rng &rng);

}  // namespace ate

#endif  // ATE_PARAMETERS_H_
