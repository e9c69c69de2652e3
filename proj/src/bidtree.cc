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

#include "ate/bidtree.h"

#include <stdexcept>
#include <string>

#include "ate/errors.h"

namespace ate {

const char *GateName(Gate gate) {
  switch (gate) {
    case Gate::kInput:
      return "i";
    case Gate::kOutput:
      return "o";
    case Gate::kForget:
      return "f";
    case Gate::kCandidate:
      return "u";
  }
  return "?";
}

bool SharesRelationMatrices(int variant, Gate gate) {
  if (variant == 1) return true;
  if (variant == 2) return gate != Gate::kForget;
  return false;
}

namespace {

constexpr double kRelationEmbeddingInit = 0.01;

TreeGateParams CreateDirection(ParameterSet &params, const std::string &prefix,
                               const BiDTreeShape &shape, int num_relations,
                               Rng &rng) {
  const auto d = static_cast<std::size_t>(shape.dim);
  TreeGateParams dir;
  for (Gate gate : kAllGates) {
    const int g = static_cast<int>(gate);
    Parameter &w = params.Add(prefix + ".W." + GateName(gate), prefix + ".W",
                              {d, d}, true);
    InitGlorot(w.value, rng);
    dir.word[g] = &w;
  }
  for (Gate gate : kAllGates) {
    const int g = static_cast<int>(gate);
    const std::string tag = std::string(GateName(gate));
    auto make = [&](const std::string &kind, const std::string &suffix) {
      Parameter &p = params.Add(prefix + "." + kind + "." + tag + suffix,
                                prefix + "." + kind, {d, d}, true);
      InitGlorot(p.value, rng);
      return static_cast<const Parameter *>(&p);
    };
    if (SharesRelationMatrices(shape.variant, gate)) {
      const Parameter *w_rel =
          shape.use_relation_terms ? make("Wrel", ".shared") : nullptr;
      const Parameter *u_rel = make("Urel", ".shared");
      if (w_rel != nullptr) dir.relation_input[g].assign(num_relations, w_rel);
      dir.relation_hidden[g].assign(num_relations, u_rel);
    } else {
      for (int r = 0; r < num_relations; ++r) {
        const std::string suffix = "." + std::to_string(r);
        if (shape.use_relation_terms) {
          dir.relation_input[g].push_back(make("Wrel", suffix));
        }
        dir.relation_hidden[g].push_back(make("Urel", suffix));
      }
    }
  }
  for (Gate gate : kAllGates) {
    const int g = static_cast<int>(gate);
    dir.bias[g] = &params.Add(prefix + ".b." + GateName(gate), prefix + ".b",
                              {d}, false);
  }
  if (shape.use_relation_terms) {
    Parameter &emb = params.Add(prefix + ".rel_emb", "relation_embeddings",
                                {static_cast<std::size_t>(num_relations), d},
                                true);
    InitUniform(emb.value, kRelationEmbeddingInit, rng);
    dir.relation_embeddings = &emb;
  }
  return dir;
}

}  // namespace

BiDTreeParams CreateBiDTreeParams(ParameterSet &params,
                                  const BiDTreeShape &shape, Rng &rng) {
  if (shape.dim <= 0) throw std::invalid_argument("tree dimension must be > 0");
  if (shape.variant < 1 || shape.variant > 3) {
    throw std::invalid_argument("variant must be 1, 2 or 3");
  }
  BiDTreeParams out;
  out.dim = shape.dim;
  out.variant = shape.variant;
  out.use_relation_terms = shape.use_relation_terms;
  if (shape.bottom_up) {
    out.up = CreateDirection(params, "tree.up", shape, shape.up_relations, rng);
  }
  if (shape.top_down) {
    out.down =
        CreateDirection(params, "tree.down", shape, shape.down_relations, rng);
  }
  return out;
}

std::pair<const Parameter *, const Parameter *> ResolveMatrices(
    const BiDTreeParams &params, TreeDirection direction, Gate gate,
    int relation) {
  const auto &dir =
      direction == TreeDirection::kBottomUp ? params.up : params.down;
  if (!dir) throw std::out_of_range("model has no such tree direction");
  if (relation < 0 || relation >= dir->num_relations()) {
    throw std::out_of_range("unknown relation id " + std::to_string(relation));
  }
  const int g = static_cast<int>(gate);
  const Parameter *w_rel =
      dir->relation_input[g].empty() ? nullptr : dir->relation_input[g][relation];
  return {w_rel, dir->relation_hidden[g][relation]};
}

NodeState ZeroState(Tape &tape, int dim) {
  Value zero = tape.Zeros(static_cast<std::size_t>(dim));
  return {zero, zero};
}

NodeState TreeCell(Tape &tape, const TreeGateParams &params,
                   bool use_relation_terms, Value word,
                   std::span<const Dependent> dependents) {
  auto param = [&](const Parameter *p) { return tape.Param(*p); };
  const int f = static_cast<int>(Gate::kForget);

  std::array<Value, kNumGates> word_term;
  for (Gate gate : kAllGates) {
    const int g = static_cast<int>(gate);
    word_term[g] = MatVec(param(params.word[g]), word);
  }

  std::vector<Value> relation_vectors;
  if (use_relation_terms) {
    for (const Dependent &dep : dependents) {
      relation_vectors.push_back(
          tape.Row(*params.relation_embeddings, static_cast<std::size_t>(dep.relation)));
    }
  }

  auto gate_input = [&](Gate gate) {
    const int g = static_cast<int>(gate);
    std::vector<Value> terms{word_term[g]};
    for (std::size_t k = 0; k < dependents.size(); ++k) {
      const int rel = dependents[k].relation;
      if (use_relation_terms) {
        terms.push_back(
            MatVec(param(params.relation_input[g][rel]), relation_vectors[k]));
      }
      terms.push_back(MatVec(param(params.relation_hidden[g][rel]),
                             dependents[k].state.h));
    }
    terms.push_back(param(params.bias[g]));
    return Sum(terms);
  };

  Value in = Sigmoid(gate_input(Gate::kInput));
  Value out = Sigmoid(gate_input(Gate::kOutput));
  Value candidate = Tanh(gate_input(Gate::kCandidate));

  std::vector<Value> cell_terms{Hadamard(in, candidate)};
  for (std::size_t k = 0; k < dependents.size(); ++k) {
    const int rel = dependents[k].relation;
    std::vector<Value> terms{word_term[f]};
    if (use_relation_terms) {
      terms.push_back(
          MatVec(param(params.relation_input[f][rel]), relation_vectors[k]));
    }
    terms.push_back(
        MatVec(param(params.relation_hidden[f][rel]), dependents[k].state.h));
    terms.push_back(param(params.bias[f]));
    Value forget = Sigmoid(Sum(terms));
    cell_terms.push_back(Hadamard(forget, dependents[k].state.s));
  }
  Value cell = cell_terms.size() == 1 ? cell_terms[0] : Sum(cell_terms);
  Value hidden = Hadamard(out, Tanh(cell));
  return {cell, hidden};
}

namespace {

void CheckInputs(const DepTree &tree, std::span<const Value> words,
                 std::span<const int> relations) {
  const auto n = static_cast<std::size_t>(tree.size());
  if (words.size() != n || relations.size() != n) {
    throw ShapeError("tree has " + std::to_string(n) + " nodes but got " +
                     std::to_string(words.size()) + " words and " +
                     std::to_string(relations.size()) + " relations");
  }
}

}  // namespace

std::vector<NodeState> BottomUpPass(Tape &tape, const BiDTreeParams &params,
                                    const DepTree &tree,
                                    std::span<const Value> words,
                                    std::span<const int> up_relations) {
  CheckInputs(tree, words, up_relations);
  if (!params.up) throw std::out_of_range("model has no bottom-up pass");
  std::vector<NodeState> states(tree.size());
  std::vector<Dependent> dependents;
  for (int node : tree.BottomUpOrder()) {
    dependents.clear();
    for (int child : tree.children(node)) {
      dependents.push_back({states[child - 1], up_relations[child - 1]});
    }
    states[node - 1] = TreeCell(tape, *params.up, params.use_relation_terms,
                                words[node - 1], dependents);
  }
  return states;
}

std::vector<NodeState> TopDownPass(Tape &tape, const BiDTreeParams &params,
                                   const DepTree &tree,
                                   std::span<const Value> words,
                                   std::span<const int> down_relations) {
  CheckInputs(tree, words, down_relations);
  if (!params.down) throw std::out_of_range("model has no top-down pass");
  std::vector<NodeState> states(tree.size());
  for (int node : tree.TopDownOrder()) {
    const int head = tree.head(node);
    const NodeState above =
        head == 0 ? ZeroState(tape, params.dim) : states[head - 1];
    const Dependent dep{above, down_relations[node - 1]};
    states[node - 1] = TreeCell(tape, *params.down, params.use_relation_terms,
                                words[node - 1], std::span(&dep, 1));
  }
  return states;
}

std::vector<Value> BiDTreeEncode(Tape &tape, const BiDTreeParams &params,
                                 const DepTree &tree,
                                 std::span<const Value> words,
                                 std::span<const int> up_relations,
                                 std::span<const int> down_relations) {
  std::vector<NodeState> up, down;
  if (params.up) up = BottomUpPass(tape, params, tree, words, up_relations);
  if (params.down) down = TopDownPass(tape, params, tree, words, down_relations);
  std::vector<Value> out;
  out.reserve(tree.size());
  for (int i = 0; i < tree.size(); ++i) {
    if (params.up && params.down) {
      out.push_back(Concat(up[i].h, down[i].h));
    } else {
      out.push_back(params.up ? up[i].h : down[i].h);
    }
  }
  return out;
}

}  // namespace ate
