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

#include "ate/sequence.h"

#include <stdexcept>

namespace ate {
namespace {

LstmParams CreateDirection(ParameterSet &params, const std::string &prefix,
                           int input_dim, int hidden_dim, Rng &rng) {
  const auto in = static_cast<std::size_t>(input_dim);
  const auto hid = static_cast<std::size_t>(hidden_dim);
  LstmParams dir;
  dir.input_dim = input_dim;
  dir.hidden_dim = hidden_dim;
  for (Gate gate : kAllGates) {
    const int g = static_cast<int>(gate);
    Parameter &w = params.Add(prefix + ".W." + GateName(gate), "lstm.W",
                              {hid, in}, true);
    InitGlorot(w.value, rng);
    dir.input[g] = &w;
  }
  for (Gate gate : kAllGates) {
    const int g = static_cast<int>(gate);
    Parameter &u = params.Add(prefix + ".U." + GateName(gate), "lstm.U",
                              {hid, hid}, true);
    InitGlorot(u.value, rng);
    dir.recurrent[g] = &u;
  }
  for (Gate gate : kAllGates) {
    const int g = static_cast<int>(gate);
    dir.bias[g] =
        &params.Add(prefix + ".b." + GateName(gate), "lstm.b", {hid}, false);
  }
  return dir;
}

}  // namespace

SeqLstmParams CreateSeqLstmParams(ParameterSet &params, int input_dim,
                                  int hidden_dim, Rng &rng) {
  SeqLstmParams out;
  out.forward = CreateDirection(params, "lstm.fwd", input_dim, hidden_dim, rng);
  out.backward = CreateDirection(params, "lstm.bwd", input_dim, hidden_dim, rng);
  return out;
}

ProjectionParams CreateProjectionParams(ParameterSet &params, int input_dim,
                                        int labels, Rng &rng) {
  ProjectionParams out;
  Parameter &w = params.Add("proj.W", "projection",
                            {static_cast<std::size_t>(labels),
                             static_cast<std::size_t>(input_dim)},
                            true);
  InitGlorot(w.value, rng);
  out.weight = &w;
  out.bias = &params.Add("proj.b", "projection",
                         {static_cast<std::size_t>(labels)}, false);
  return out;
}

LstmState LstmStep(Tape &tape, const LstmParams &params, Value x,
                   const LstmState &prev) {
  auto pre = [&](Gate gate) {
    const int g = static_cast<int>(gate);
    Value terms[3] = {MatVec(tape.Param(*params.input[g]), x),
                      MatVec(tape.Param(*params.recurrent[g]), prev.h),
                      tape.Param(*params.bias[g])};
    return Sum(terms);
  };
  Value in = Sigmoid(pre(Gate::kInput));
  Value out = Sigmoid(pre(Gate::kOutput));
  Value forget = Sigmoid(pre(Gate::kForget));
  Value candidate = Tanh(pre(Gate::kCandidate));
  Value c = Add(Hadamard(in, candidate), Hadamard(forget, prev.c));
  Value h = Hadamard(out, Tanh(c));
  return {h, c};
}

std::vector<Value> BiLstm(Tape &tape, const SeqLstmParams &params,
                          std::span<const Value> inputs) {
  if (inputs.empty()) throw std::invalid_argument("BiLSTM over empty sentence");
  const std::size_t n = inputs.size();
  std::vector<Value> forward(n), backward(n);

  Value zero = tape.Zeros(static_cast<std::size_t>(params.forward.hidden_dim));
  LstmState state{zero, zero};
  for (std::size_t j = 0; j < n; ++j) {
    state = LstmStep(tape, params.forward, inputs[j], state);
    forward[j] = state.h;
  }
  zero = tape.Zeros(static_cast<std::size_t>(params.backward.hidden_dim));
  state = {zero, zero};
  for (std::size_t j = n; j-- > 0;) {
    state = LstmStep(tape, params.backward, inputs[j], state);
    backward[j] = state.h;
  }

  std::vector<Value> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.push_back(Concat(forward[j], backward[j]));
  return out;
}

Value Project(Tape &tape, const ProjectionParams &params, Value g) {
  return Add(MatVec(tape.Param(*params.weight), g), tape.Param(*params.bias));
}

}  // namespace ate
