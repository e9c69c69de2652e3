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

#ifndef ATE_OPTIM_H_
#define ATE_OPTIM_H_

#include <cstdint>
#include <vector>

#include "ate/parameters.h"
#include "ate/tensor.h"

namespace ate {

// Rescales every gradient by max_norm / g when the global L2 norm g exceeds
// max_norm. Returns the norm before clipping.
double ClipGlobalNorm(Gradients &grads, double max_norm);

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(const ParameterSet &params);

  std::int64_t step() const { return step_; }
  const Tensor &first_moment(std::size_t id) const { return m_[id]; }
  const Tensor &second_moment(std::size_t id) const { return v_[id]; }

 private:
  friend void AdamStep(ParameterSet &, const Gradients &, AdamState &,
                       const AdamOptions &);
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::int64_t step_ = 0;
};

// Bias-corrected Adam update of every parameter, in place.
void AdamStep(ParameterSet &params, const Gradients &grads, AdamState &state,
              const AdamOptions &options);

}  // namespace ate

#endif  // ATE_OPTIM_H_
