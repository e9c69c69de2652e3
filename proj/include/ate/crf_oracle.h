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

// Exhaustive enumeration over all 3^N label sequences. Only meant for
// checking the dynamic programs on short inputs.

#ifndef ATE_CRF_ORACLE_H_
#define ATE_CRF_ORACLE_H_

#include <cstddef>
#include <vector>

#include "ate/crf.h"

namespace ate {

inline constexpr std::size_t kMaxBruteForceLength = 10;

// Throws std::invalid_argument when N is 0 or above kMaxBruteForceLength.
double BruteForceLogPartition(const CrfParams &crf, const FeatureSeq &features);

// Among maximizers, prefers the smaller label at the last position, then at
// the one before, and so on (the order Viterbi backtracking produces).
ViterbiResult BruteForceBest(const CrfParams &crf, const FeatureSeq &features);

// Calls `visit(labels)` for every sequence of length n in lexicographic order.
template <typename Visitor>
void ForEachLabelSequence(std::size_t n, Visitor &&visit) {
  std::vector<Label> labels(n, static_cast<Label>(0));
  while (true) {
    visit(static_cast<const std::vector<Label> &>(labels));
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      int next = static_cast<int>(labels[pos]) + 1;
      if (next < kNumLabels) {
        labels[pos] = static_cast<Label>(next);
        break;
      }
      labels[pos] = static_cast<Label>(0);
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace ate

#endif  // ATE_CRF_ORACLE_H_
