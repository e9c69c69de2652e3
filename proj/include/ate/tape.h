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

// Reverse-mode differentiation over a dynamically recorded graph.
//
// A Tape records every operation applied to Values in creation order, which
// is also a topological order, so Backward() simply walks the nodes in
// reverse. One tape is built per sentence and thrown away afterwards.
//
// Parameters enter the graph in two ways:
//   Param(p)    the whole tensor, referenced in place (no copy);
//   Row(p, r)   a copy of one row of a matrix, e.g. an embedding lookup.
// Gradients for parameters stay on the tape until AccumulateInto() adds
// them to a Gradients buffer, so independent tapes can run on different
// threads and be reduced in a fixed order afterwards.

#ifndef ATE_TAPE_H_
#define ATE_TAPE_H_

#include <cstddef>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ate/parameters.h"
#include "ate/tensor.h"

namespace ate {

class Tape;

// Handle to a node on a tape. Cheap to copy; only valid while the tape is.
class Value {
 public:
  Value() = default;

  const Tensor &value() const;
  // Value of a size-1 node.
  double scalar() const;
  std::size_t size() const { return value().size(); }
  Tape *tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Value(Tape *tape, int id) : tape_(tape), id_(id) {}

  Tape *tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  // Adds the node's output gradient into the gradients of its inputs.
  using BackwardFn = std::function<void(Tape &tape, int self)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Value Constant(Tensor value);
  Value Zeros(std::size_t n) { return Constant(Tensor({n})); }
  // Leaf for a whole parameter. Repeated calls return the same node.
  Value Param(const Parameter &param);
  // Leaf holding a copy of row `row` of a rank-2 parameter.
  Value Row(const Parameter &param, std::size_t row);

  // Records an operation node. `fn` may be empty for nodes without inputs
  // that need gradients.
  Value Push(Tensor value, std::vector<int> inputs, BackwardFn fn);

  const Tensor &value(int id) const;
  // Gradient slot of a node during Backward(); nullptr when the node does not
  // depend on any parameter.
  Tensor *grad_slot(int id);
  const Tensor &grad(int id) const;
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }

  // Reverse sweep from a size-1 root. May be called again after recording
  // more nodes; every call starts from cleared gradients.
  void Backward(Value root);

  // Adds parameter gradients collected by the last Backward() into `grads`,
  // in node creation order.
  void AccumulateInto(Gradients &grads) const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    const Parameter *param = nullptr;  // parameter leaf or row lookup
    std::size_t row = kWholeParam;
    bool requires_grad = false;
    Tensor grad;
    std::vector<int> inputs;
    BackwardFn backward;
  };
  static constexpr std::size_t kWholeParam = static_cast<std::size_t>(-1);

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter *, int> param_nodes_;
  bool has_grads_ = false;
};

// Primitive operations. Every operation checks shapes and throws ShapeError
// naming both operands on mismatch.
Value MatVec(Value m, Value v);
Value Add(Value a, Value b);
Value Sub(Value a, Value b);
Value Sum(std::span<const Value> values);
Value Concat(Value a, Value b);
Value Concat(std::span<const Value> values);
Value Hadamard(Value a, Value b);
Value Sigmoid(Value a);
Value Tanh(Value a);
Value Dot(Value a, Value b);
Value LogSumExp(Value a);
Value Scale(Value a, double k);
Value Select(Value v, std::size_t index);
Value Gather(Value v, std::span<const std::size_t> indices);
Value SquaredNorm(Value a);

}  // namespace ate

#endif  // ATE_TAPE_H_
