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

#ifndef ATE_SEQUENCE_H_
#define ATE_SEQUENCE_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ate/bidtree.h"
#include "ate/parameters.h"
#include "ate/tape.h"

namespace ate {

// Peephole-free LSTM for one direction: W (hidden x input), U (hidden x
// hidden) and b (hidden) per gate.
struct LstmParams {
  std::array<const Parameter *, kNumGates> input{};
  std::array<const Parameter *, kNumGates> recurrent{};
  std::array<const Parameter *, kNumGates> bias{};
  int input_dim = 0;
  int hidden_dim = 0;
};

struct SeqLstmParams {
  LstmParams forward;
  LstmParams backward;
};

struct ProjectionParams {
  const Parameter *weight = nullptr;  // labels x input
  const Parameter *bias = nullptr;    // labels
};

SeqLstmParams CreateSeqLstmParams(ParameterSet &params, int input_dim,
                                  int hidden_dim, Rng &rng);
ProjectionParams CreateProjectionParams(ParameterSet &params, int input_dim,
                                        int labels, Rng &rng);

struct LstmState {
  Value h;
  Value c;
};

LstmState LstmStep(Tape &tape, const LstmParams &params, Value x,
                   const LstmState &prev);

// g_j = [forward h_j ; backward h_j], both directions starting from zero
// h and c. Throws std::invalid_argument on an empty input.
std::vector<Value> BiLstm(Tape &tape, const SeqLstmParams &params,
                          std::span<const Value> inputs);

// Affine map to per-label scores; no nonlinearity.
Value Project(Tape &tape, const ProjectionParams &params, Value g);

}  // namespace ate

#endif  // ATE_SEQUENCE_H_
