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

#include "ate/optim.h"

#include <cmath>
#include <stdexcept>

#include "ate/errors.h"

namespace ate {

double ClipGlobalNorm(Gradients &grads, double max_norm) {
  if (!(max_norm > 0.0)) throw std::invalid_argument("max_norm must be > 0");
  const double norm = grads.GlobalNorm();
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (Tensor &g : grads) {
      for (double &v : g.data()) v *= scale;
    }
  }
  return norm;
}

AdamState::AdamState(const ParameterSet &params) {
  for (const auto &p : params) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void AdamStep(ParameterSet &params, const Gradients &grads, AdamState &state,
              const AdamOptions &options) {
  if (state.m_.size() != params.size() || grads.size() != params.size()) {
    throw ShapeError("Adam state does not match the parameter set");
  }
  ++state.step_;
  const double t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t id = 0; id < params.size(); ++id) {
    Tensor &value = params[id].value;
    const Tensor &g = grads[id];
    Tensor &m = state.m_[id];
    Tensor &v = state.v_[id];
    for (std::size_t i = 0; i < value.size(); ++i) {
      m[i] = options.beta1 * m[i] + (1.0 - options.beta1) * g[i];
      v[i] = options.beta2 * v[i] + (1.0 - options.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= options.learning_rate * m_hat /
                  (std::sqrt(v_hat) + options.epsilon);
    }
  }
}

}  // namespace ate
