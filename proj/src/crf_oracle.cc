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

#include "ate/crf_oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ate {
namespace {

void CheckLength(std::size_t n) {
  if (n == 0 || n > kMaxBruteForceLength) {
    throw std::invalid_argument("brute force needs 1 <= N <= " +
                                std::to_string(kMaxBruteForceLength) +
                                ", got " + std::to_string(n));
  }
}

// True when `a` precedes `b` comparing from the last position backwards.
bool ReverseLexLess(const std::vector<Label> &a, const std::vector<Label> &b) {
  for (std::size_t j = a.size(); j-- > 0;) {
    if (a[j] != b[j]) return a[j] < b[j];
  }
  return false;
}

}  // namespace

double BruteForceLogPartition(const CrfParams &crf, const FeatureSeq &features) {
  CheckLength(features.size());
  std::vector<double> scores;
  ForEachLabelSequence(features.size(), [&](const std::vector<Label> &labels) {
    scores.push_back(SequenceScore(crf, features, labels));
  });
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - top);
  return top + std::log(sum);
}

ViterbiResult BruteForceBest(const CrfParams &crf, const FeatureSeq &features) {
  CheckLength(features.size());
  ViterbiResult best;
  best.score = -std::numeric_limits<double>::infinity();
  ForEachLabelSequence(features.size(), [&](const std::vector<Label> &labels) {
    const double s = SequenceScore(crf, features, labels);
    if (s > best.score ||
        (s == best.score && ReverseLexLess(labels, best.labels))) {
      best.score = s;
      best.labels = labels;
    }
  });
  return best;
}

}  // namespace ate
