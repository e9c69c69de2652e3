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

// Bidirectional typed dependency-tree LSTM.
//
// For a governor p with dependents C(p), each connected by relation r_k with
// relation embedding e(r_k), one direction computes
//
//   T_g   = W_g x_p + sum_k Wrel_g[r_k] e(r_k)            g in {i, o, u}
//   T_f,k = W_f x_p + Wrel_f[r_k] e(r_k)
//   i  = sigmoid(T_i   + sum_k Urel_i[r_k] h_k + b_i)
//   o  = sigmoid(T_o   + sum_k Urel_o[r_k] h_k + b_o)
//   f_k = sigmoid(T_f,k + Urel_f[r_k] h_k + b_f)
//   u  = tanh(T_u      + sum_k Urel_u[r_k] h_k + b_u)
//   s  = i * u + sum_k f_k * s_k
//   h  = o * tanh(s)
//
// The bottom-up pass takes a node's children as dependents. The top-down
// pass takes the node's head as its single dependent, under the inverse
// ("I-"-prefixed) relation; the root's dependent is a zero state under
// "I-root". Each word's output is [h_up ; h_down].
//
// Weight-sharing variants for the relation-indexed matrices Wrel/Urel:
//   1  one pair per gate, shared by all relations;
//   2  like 1 for gates i, o, u; the forget gate has one pair per relation;
//   3  one pair per gate and relation.

#ifndef ATE_BIDTREE_H_
#define ATE_BIDTREE_H_

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ate/corpus.h"
#include "ate/parameters.h"
#include "ate/tape.h"

namespace ate {

enum class Gate : int { kInput = 0, kOutput = 1, kForget = 2, kCandidate = 3 };
inline constexpr int kNumGates = 4;
inline constexpr std::array<Gate, kNumGates> kAllGates = {
    Gate::kInput, Gate::kOutput, Gate::kForget, Gate::kCandidate};
const char *GateName(Gate gate);

enum class TreeDirection { kBottomUp, kTopDown };

// Parameters of one pass. Relation-indexed slots of shared gates all point
// at the same Parameter.
struct TreeGateParams {
  std::array<const Parameter *, kNumGates> word{};
  std::array<const Parameter *, kNumGates> bias{};
  // Empty when relation terms are disabled.
  std::array<std::vector<const Parameter *>, kNumGates> relation_input;
  std::array<std::vector<const Parameter *>, kNumGates> relation_hidden;
  // num_relations x d; nullptr when relation terms are disabled.
  const Parameter *relation_embeddings = nullptr;

  int num_relations() const {
    return static_cast<int>(relation_hidden[0].size());
  }
};

struct BiDTreeParams {
  int dim = 0;
  int variant = 3;
  bool use_relation_terms = true;
  std::optional<TreeGateParams> up;
  std::optional<TreeGateParams> down;
};

struct BiDTreeShape {
  int dim = 0;
  int variant = 3;
  bool use_relation_terms = true;
  int up_relations = 0;
  int down_relations = 0;
  bool bottom_up = true;
  bool top_down = true;
};

// Registers and initializes the tree parameters: Glorot-uniform matrices,
// zero biases, relation embeddings uniform in [-0.01, 0.01].
BiDTreeParams CreateBiDTreeParams(ParameterSet &params, const BiDTreeShape &shape,
                                  Rng &rng);

bool SharesRelationMatrices(int variant, Gate gate);

// (Wrel, Urel) used by `gate` for `relation` in the given direction. Wrel is
// nullptr when relation terms are disabled. Throws std::out_of_range for an
// unknown relation id or a direction the model does not have.
std::pair<const Parameter *, const Parameter *> ResolveMatrices(
    const BiDTreeParams &params, TreeDirection direction, Gate gate,
    int relation);

struct NodeState {
  Value s;
  Value h;
};

struct Dependent {
  NodeState state;
  int relation = 0;
};

NodeState ZeroState(Tape &tape, int dim);

// One tree-LSTM transition. With no dependents every sum is empty and
// s = i * u.
NodeState TreeCell(Tape &tape, const TreeGateParams &params,
                   bool use_relation_terms, Value word,
                   std::span<const Dependent> dependents);

// `relations[i]` is the relation id (in the pass's own inventory) of the arc
// between node i + 1 and its head. States are indexed by node - 1.
std::vector<NodeState> BottomUpPass(Tape &tape, const BiDTreeParams &params,
                                    const DepTree &tree,
                                    std::span<const Value> words,
                                    std::span<const int> up_relations);

// `down_relations[root - 1]` must hold the id of the virtual root relation.
std::vector<NodeState> TopDownPass(Tape &tape, const BiDTreeParams &params,
                                   const DepTree &tree,
                                   std::span<const Value> words,
                                   std::span<const int> down_relations);

// Output per word: [h_up ; h_down] when both passes exist, otherwise the
// single pass's h.
std::vector<Value> BiDTreeEncode(Tape &tape, const BiDTreeParams &params,
                                 const DepTree &tree,
                                 std::span<const Value> words,
                                 std::span<const int> up_relations,
                                 std::span<const int> down_relations);

}  // namespace ate

#endif  // ATE_BIDTREE_H_
