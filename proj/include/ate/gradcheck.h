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

#ifndef ATE_GRADCHECK_H_
#define ATE_GRADCHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ate/parameters.h"
#include "ate/tape.h"

namespace ate {

// Builds a deterministic scalar loss on a fresh tape.
using LossBuilder = std::function<Value(Tape &)>;

struct GradCheckOptions {
  double epsilon = 1e-4;
  // Parameters larger than this are sampled: half the budget goes to
  // coordinates with a nonzero analytic gradient, the rest is uniform.
  std::size_t max_coords_per_param = 24;
  std::uint64_t seed = 17;
};

struct GroupError {
  std::string group;
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coords_checked = 0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::vector<GroupError> groups;  // in first-appearance order
};

// |a - n| / max(1, |a|, |n|)
double RelativeError(double analytic, double numeric);

// Compares reverse-mode gradients of `loss` against central differences.
// Parameters are perturbed in place and restored before returning.
GradCheckReport GradCheck(const LossBuilder &loss, ParameterSet &params,
                          const GradCheckOptions &options = {});

}  // namespace ate

#endif  // ATE_GRADCHECK_H_
