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

#include "ate/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

namespace ate {
namespace {

double EvaluateLoss(const LossBuilder &loss) {
  Tape tape;
  return loss(tape).scalar();
}

std::vector<std::size_t> PickCoordinates(const Tensor &grad, std::size_t budget,
                                         Rng &rng) {
  std::vector<std::size_t> all(grad.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (grad.size() <= budget) return all;

  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (grad[i] != 0.0) nonzero.push_back(i);
  }
  std::shuffle(nonzero.begin(), nonzero.end(), rng);
  std::vector<std::size_t> picked(
      nonzero.begin(),
      nonzero.begin() + std::min(nonzero.size(), budget / 2));
  std::shuffle(all.begin(), all.end(), rng);
  for (std::size_t i : all) {
    if (picked.size() >= budget) break;
    if (std::find(picked.begin(), picked.end(), i) == picked.end()) {
      picked.push_back(i);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

double RelativeError(double analytic, double numeric) {
  const double scale =
      std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
  return std::fabs(analytic - numeric) / scale;
}

GradCheckReport GradCheck(const LossBuilder &loss, ParameterSet &params,
                          const GradCheckOptions &options) {
  Gradients analytic(params);
  {
    Tape tape;
    Value root = loss(tape);
    tape.Backward(root);
    tape.AccumulateInto(analytic);
  }

  Rng rng(options.seed);
  GradCheckReport report;
  for (std::size_t id = 0; id < params.size(); ++id) {
    Parameter &param = params[id];
    auto group = std::find_if(
        report.groups.begin(), report.groups.end(),
        [&](const GroupError &g) { return g.group == param.group; });
    if (group == report.groups.end()) {
      GroupError fresh;
      fresh.group = param.group;
      report.groups.push_back(std::move(fresh));
      group = report.groups.end() - 1;
    }
    for (std::size_t i :
         PickCoordinates(analytic[id], options.max_coords_per_param, rng)) {
      const double saved = param.value[i];
      param.value[i] = saved + options.epsilon;
      const double plus = EvaluateLoss(loss);
      param.value[i] = saved - options.epsilon;
      const double minus = EvaluateLoss(loss);
      param.value[i] = saved;

      const double numeric = (plus - minus) / (2.0 * options.epsilon);
      const double err = RelativeError(analytic[id][i], numeric);
      ++group->coords_checked;
      if (group->worst_param.empty() || err > group->max_rel_error) {
        group->max_rel_error = err;
        group->worst_param = param.name;
        group->worst_index = i;
        group->analytic = analytic[id][i];
        group->numeric = numeric;
      }
      report.max_rel_error = std::max(report.max_rel_error, err);
    }
  }
  return report;
}

}  // namespace ate
