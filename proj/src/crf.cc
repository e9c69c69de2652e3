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

#include "ate/crf.h"

#include <array>
#include <stdexcept>
#include <string>

#include "ate/errors.h"

namespace ate {

CrfParams CreateCrfParams(ParameterSet &params, Rng &rng) {
  CrfParams crf;
  Parameter &w = params.Add("crf.W", "crf",
                            {static_cast<std::size_t>(kNumPairs),
                             static_cast<std::size_t>(kNumLabels)},
                            true);
  InitGlorot(w.value, rng);
  crf.weight = &w;
  crf.bias = &params.Add("crf.b", "crf", {static_cast<std::size_t>(kNumPairs)},
                         false);
  return crf;
}

double PairScore(const CrfParams &crf, int prev, int cur,
                 std::span<const double> g) {
  if (prev < 0 || prev > kStartLabel || cur < 0 || cur >= kNumLabels) {
    throw std::out_of_range("invalid label pair (" + std::to_string(prev) +
                            ", " + std::to_string(cur) + ")");
  }
  if (g.size() != static_cast<std::size_t>(kNumLabels)) {
    throw ShapeError("CRF feature has length " + std::to_string(g.size()) +
                     ", expected " + std::to_string(kNumLabels));
  }
  const int pair = PairIndex(prev, cur);
  auto w = crf.weight->value.row(pair);
  double score = 0.0;
  for (int k = 0; k < kNumLabels; ++k) score += w[k] * g[k];
  return score + crf.bias->value[pair];
}

double SequenceScore(const CrfParams &crf, const FeatureSeq &features,
                     std::span<const Label> labels) {
  if (labels.size() != features.size()) {
    throw ShapeError("label sequence length differs from feature length");
  }
  double score = 0.0;
  int prev = kStartLabel;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const int cur = static_cast<int>(labels[j]);
    score += PairScore(crf, prev, cur, features[j]);
    prev = cur;
  }
  return score;
}

Value PairScores(Tape &tape, const CrfParams &crf, Value g) {
  return Add(MatVec(tape.Param(*crf.weight), g), tape.Param(*crf.bias));
}

Value LogPartition(Tape &tape, const CrfParams &crf,
                   std::span<const Value> features) {
  if (features.empty()) throw std::invalid_argument("CRF over empty sequence");
  // alpha_1(y) = score(START, y); alpha_j(y) = lse_y'(alpha_{j-1}(y') + s_j(y', y))
  std::vector<std::size_t> from_start(kNumLabels);
  for (int y = 0; y < kNumLabels; ++y) from_start[y] = PairIndex(kStartLabel, y);
  Value alpha = Gather(PairScores(tape, crf, features[0]), from_start);

  std::vector<Value> next(kNumLabels);
  std::vector<std::size_t> into(kNumLabels);
  for (std::size_t j = 1; j < features.size(); ++j) {
    Value scores = PairScores(tape, crf, features[j]);
    for (int y = 0; y < kNumLabels; ++y) {
      for (int prev = 0; prev < kNumLabels; ++prev) into[prev] = PairIndex(prev, y);
      next[y] = LogSumExp(Add(alpha, Gather(scores, into)));
    }
    alpha = Concat(next);
  }
  return LogSumExp(alpha);
}

Value LogLikelihood(Tape &tape, const CrfParams &crf,
                    std::span<const Value> features,
                    std::span<const Label> labels) {
  if (labels.size() != features.size()) {
    throw ShapeError("CRF got " + std::to_string(labels.size()) +
                     " labels for " + std::to_string(features.size()) +
                     " positions");
  }
  Value log_z = LogPartition(tape, crf, features);
  std::vector<Value> gold;
  gold.reserve(labels.size());
  int prev = kStartLabel;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const int cur = static_cast<int>(labels[j]);
    Value scores = PairScores(tape, crf, features[j]);
    gold.push_back(Select(scores, static_cast<std::size_t>(PairIndex(prev, cur))));
    prev = cur;
  }
  return Sub(Sum(gold), log_z);
}

namespace {

std::vector<Value> ToTape(Tape &tape, const FeatureSeq &features) {
  std::vector<Value> out;
  out.reserve(features.size());
  for (const auto &g : features) out.push_back(tape.Constant(Tensor::Vector(g)));
  return out;
}

}  // namespace

double LogPartition(const CrfParams &crf, const FeatureSeq &features) {
  Tape tape;
  return LogPartition(tape, crf, ToTape(tape, features)).scalar();
}

double LogLikelihood(const CrfParams &crf, const FeatureSeq &features,
                     std::span<const Label> labels) {
  Tape tape;
  return LogLikelihood(tape, crf, ToTape(tape, features), labels).scalar();
}

ViterbiResult Viterbi(const CrfParams &crf, const FeatureSeq &features) {
  const std::size_t n = features.size();
  if (n == 0) throw std::invalid_argument("Viterbi over empty sequence");
  std::vector<std::array<double, kNumLabels>> best(n);
  std::vector<std::array<int, kNumLabels>> back(n);
  for (int y = 0; y < kNumLabels; ++y) {
    best[0][y] = PairScore(crf, kStartLabel, y, features[0]);
    back[0][y] = kStartLabel;
  }
  for (std::size_t j = 1; j < n; ++j) {
    for (int y = 0; y < kNumLabels; ++y) {
      int arg = 0;
      double top = best[j - 1][0] + PairScore(crf, 0, y, features[j]);
      for (int prev = 1; prev < kNumLabels; ++prev) {
        const double s = best[j - 1][prev] + PairScore(crf, prev, y, features[j]);
        if (s > top) {
          top = s;
          arg = prev;
        }
      }
      best[j][y] = top;
      back[j][y] = arg;
    }
  }
  int last = 0;
  for (int y = 1; y < kNumLabels; ++y) {
    if (best[n - 1][y] > best[n - 1][last]) last = y;
  }
  ViterbiResult result;
  result.score = best[n - 1][last];
  result.labels.resize(n);
  int y = last;
  for (std::size_t j = n; j-- > 0;) {
    result.labels[j] = static_cast<Label>(y);
    y = back[j][y];
  }
  return result;
}

bool IsStrictBio(std::span<const Label> labels) {
  Label prev = Label::kOutside;
  for (Label label : labels) {
    if (label == Label::kInsideAspect && prev == Label::kOutside) return false;
    prev = label;
  }
  return true;
}

}  // namespace ate
