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

#include "ate/parameters.h"

#include <cmath>
#include <stdexcept>

#include "ate/errors.h"

namespace ate {

Parameter &ParameterSet::Add(std::string name, std::string group, Shape shape,
                             bool regularized) {
  if (Find(name) != nullptr) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  auto param = std::make_unique<Parameter>();
  param->id = params_.size();
  param->name = std::move(name);
  param->group = std::move(group);
  param->regularized = regularized;
  param->value = Tensor(std::move(shape));
  params_.push_back(std::move(param));
  return *params_.back();
}

Parameter *ParameterSet::Find(const std::string &name) {
  for (auto &p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

const Parameter *ParameterSet::Find(const std::string &name) const {
  for (const auto &p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

std::size_t ParameterSet::ScalarCount() const {
  std::size_t total = 0;
  for (const auto &p : params_) total += p->value.size();
  return total;
}

std::vector<Tensor> ParameterSet::Snapshot() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const auto &p : params_) out.push_back(p->value);
  return out;
}

void ParameterSet::Restore(const std::vector<Tensor> &snapshot) {
  if (snapshot.size() != params_.size()) {
    throw ShapeError("snapshot has " + std::to_string(snapshot.size()) +
                     " tensors, model has " + std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!snapshot[i].SameShape(params_[i]->value)) {
      throw ShapeError("snapshot shape mismatch for " + params_[i]->name);
    }
    params_[i]->value = snapshot[i];
  }
}

Gradients::Gradients(const ParameterSet &params) {
  grads_.reserve(params.size());
  for (const auto &p : params) grads_.emplace_back(p->value.shape());
}

void Gradients::Zero() {
  for (auto &g : grads_) g.Fill(0.0);
}

double Gradients::GlobalNorm() const {
  double sum = 0.0;
  for (const auto &g : grads_) sum += g.SquaredNorm();
  return std::sqrt(sum);
}

bool Gradients::AllFinite() const {
  for (const auto &g : grads_) {
    if (!g.AllFinite()) return false;
  }
  return true;
}

void InitUniform(Tensor &t, double limit, Rng &rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double &v : t.data()) v = dist(rng);
}

void InitGlorot(Tensor &t, Rng &rng) {
  if (t.rank() != 2) throw ShapeError("Glorot init needs a matrix");
  InitUniform(t, std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols())),
              rng);
}

}  // namespace ate
