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

// Linear-chain CRF with one weight vector and bias per label pair:
//
//   log psi_j(y', y) = w[y', y] . g_j + b[y', y]
//
// y' ranges over the labels plus a virtual START used at position 1. There
// is no STOP potential. log Z is computed by the forward recursion in log
// space on a tape, so its gradient comes from the same code path.

#ifndef ATE_CRF_H_
#define ATE_CRF_H_

#include <span>
#include <vector>

#include "ate/corpus.h"
#include "ate/parameters.h"
#include "ate/tape.h"

namespace ate {

inline constexpr int kStartLabel = kNumLabels;
inline constexpr int kNumPairs = (kNumLabels + 1) * kNumLabels;

// Row index of pair (prev, cur) in the weight matrix and bias vector.
constexpr int PairIndex(int prev, int cur) { return prev * kNumLabels + cur; }

struct CrfParams {
  const Parameter *weight = nullptr;  // kNumPairs x kNumLabels
  const Parameter *bias = nullptr;    // kNumPairs
};

// Weights Glorot-uniform, biases zero.
CrfParams CreateCrfParams(ParameterSet &params, Rng &rng);

// Per-position feature vectors g_1..g_N, each of length kNumLabels.
using FeatureSeq = std::vector<std::vector<double>>;

// Throws std::out_of_range for label ids outside T (prev may be START) and
// ShapeError when g has the wrong length.
double PairScore(const CrfParams &crf, int prev, int cur,
                 std::span<const double> g);

// Unnormalized log score of a label sequence.
double SequenceScore(const CrfParams &crf, const FeatureSeq &features,
                     std::span<const Label> labels);

// Tape versions; features are length-kNumLabels vectors on `tape`.
Value PairScores(Tape &tape, const CrfParams &crf, Value g);
Value LogPartition(Tape &tape, const CrfParams &crf,
                   std::span<const Value> features);
Value LogLikelihood(Tape &tape, const CrfParams &crf,
                    std::span<const Value> features,
                    std::span<const Label> labels);

double LogPartition(const CrfParams &crf, const FeatureSeq &features);
double LogLikelihood(const CrfParams &crf, const FeatureSeq &features,
                     std::span<const Label> labels);

struct ViterbiResult {
  std::vector<Label> labels;
  double score = 0.0;
};

// Exact maximizer of the unnormalized score. Ties go to the smaller label id
// at the final position and at every backtracking step.
ViterbiResult Viterbi(const CrfParams &crf, const FeatureSeq &features);

// True when no I-AP follows O or starts the sequence. Diagnostic only; the
// CRF does not enforce it.
bool IsStrictBio(std::span<const Label> labels);

}  // namespace ate

#endif  // ATE_CRF_H_
