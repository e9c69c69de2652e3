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

#include "ate/tape.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ate/errors.h"

namespace ate {

const Tensor &Value::value() const { return tape_->value(id_); }

double Value::scalar() const {
  const Tensor &t = value();
  if (t.size() != 1) {
    throw ShapeError("scalar() on tensor of shape " + ShapeString(t.shape()));
  }
  return t[0];
}

Value Tape::Constant(Tensor value) { return Push(std::move(value), {}, {}); }

Value Tape::Param(const Parameter &param) {
  auto it = param_nodes_.find(&param);
  if (it != param_nodes_.end()) return Value(this, it->second);
  Node node;
  node.param = &param;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  int id = static_cast<int>(nodes_.size()) - 1;
  param_nodes_.emplace(&param, id);
  return Value(this, id);
}

Value Tape::Row(const Parameter &param, std::size_t row) {
  if (param.value.rank() != 2 || row >= param.value.rows()) {
    throw ShapeError("row " + std::to_string(row) + " out of range for " +
                     param.name + " " + ShapeString(param.value.shape()));
  }
  auto r = param.value.row(row);
  Node node;
  node.value = Tensor::Vector(std::vector<double>(r.begin(), r.end()));
  node.param = &param;
  node.row = row;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Value(this, static_cast<int>(nodes_.size()) - 1);
}

Value Tape::Push(Tensor value, std::vector<int> inputs, BackwardFn fn) {
  Node node;
  node.value = std::move(value);
  for (int in : inputs) {
    if (nodes_[in].requires_grad) node.requires_grad = true;
  }
  node.inputs = std::move(inputs);
  node.backward = std::move(fn);
  nodes_.push_back(std::move(node));
  return Value(this, static_cast<int>(nodes_.size()) - 1);
}

const Tensor &Tape::value(int id) const {
  const Node &node = nodes_[id];
  if (node.param != nullptr && node.row == kWholeParam) {
    return node.param->value;
  }
  return node.value;
}

Tensor *Tape::grad_slot(int id) {
  Node &node = nodes_[id];
  return node.requires_grad ? &node.grad : nullptr;
}

const Tensor &Tape::grad(int id) const { return nodes_[id].grad; }

void Tape::Backward(Value root) {
  if (root.tape() != this) throw ShapeError("root belongs to another tape");
  if (value(root.id()).size() != 1) {
    throw ShapeError("backward needs a scalar root, got shape " +
                     ShapeString(value(root.id()).shape()));
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    Node &node = nodes_[i];
    if (node.requires_grad) {
      node.grad = Tensor(value(static_cast<int>(i)).shape());
    } else {
      node.grad = Tensor();
    }
  }
  has_grads_ = true;
  if (!nodes_[root.id()].requires_grad) return;
  nodes_[root.id()].grad[0] = 1.0;
  for (int i = root.id(); i >= 0; --i) {
    Node &node = nodes_[i];
    if (!node.requires_grad || !node.backward) continue;
    node.backward(*this, i);
  }
}

void Tape::AccumulateInto(Gradients &grads) const {
  if (!has_grads_) return;
  for (const Node &node : nodes_) {
    if (node.param == nullptr) continue;
    Tensor &target = grads[node.param->id];
    if (node.row == kWholeParam) {
      target.AddScaled(node.grad);
    } else {
      auto dst = target.row(node.row);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += node.grad[j];
    }
  }
}

namespace {

Tape &SameTape(Value a, Value b) {
  if (a.tape() == nullptr || a.tape() != b.tape()) {
    throw ShapeError("operands live on different tapes");
  }
  return *a.tape();
}

void RequireSameShape(const char *op, const Tensor &a, const Tensor &b) {
  if (!a.SameShape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     ShapeString(a.shape()) + " vs " + ShapeString(b.shape()));
  }
}

void RequireVector(const char *op, const Tensor &a) {
  if (a.rank() != 1) {
    throw ShapeError(std::string(op) + ": expected a vector, got " +
                     ShapeString(a.shape()));
  }
}

double StableSigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Value MatVec(Value m, Value v) {
  Tape &tape = SameTape(m, v);
  const Tensor &mt = m.value();
  const Tensor &vt = v.value();
  if (mt.rank() != 2 || vt.rank() != 1 || mt.cols() != vt.size()) {
    throw ShapeError("matvec: shape mismatch " + ShapeString(mt.shape()) +
                     " vs " + ShapeString(vt.shape()));
  }
  const std::size_t rows = mt.rows(), cols = mt.cols();
  Tensor out({rows});
  for (std::size_t r = 0; r < rows; ++r) {
    const double *row = &mt.data()[r * cols];
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) sum += row[c] * vt[c];
    out[r] = sum;
  }
  int mi = m.id(), vi = v.id();
  return tape.Push(std::move(out), {mi, vi}, [mi, vi](Tape &t, int self) {
    const Tensor &g = t.grad(self);
    const Tensor &mv = t.value(mi);
    const Tensor &vv = t.value(vi);
    const std::size_t rows = mv.rows(), cols = mv.cols();
    if (Tensor *gm = t.grad_slot(mi)) {
      for (std::size_t r = 0; r < rows; ++r) {
        const double gr = g[r];
        if (gr == 0.0) continue;
        double *dst = &gm->data()[r * cols];
        for (std::size_t c = 0; c < cols; ++c) dst[c] += gr * vv[c];
      }
    }
    if (Tensor *gv = t.grad_slot(vi)) {
      for (std::size_t r = 0; r < rows; ++r) {
        const double gr = g[r];
        if (gr == 0.0) continue;
        const double *row = &mv.data()[r * cols];
        for (std::size_t c = 0; c < cols; ++c) (*gv)[c] += gr * row[c];
      }
    }
  });
}

Value Add(Value a, Value b) {
  Tape &tape = SameTape(a, b);
  RequireSameShape("add", a.value(), b.value());
  Tensor out = a.value();
  out.AddScaled(b.value());
  int ai = a.id(), bi = b.id();
  return tape.Push(std::move(out), {ai, bi}, [ai, bi](Tape &t, int self) {
    const Tensor &g = t.grad(self);
    if (Tensor *ga = t.grad_slot(ai)) ga->AddScaled(g);
    if (Tensor *gb = t.grad_slot(bi)) gb->AddScaled(g);
  });
}

Value Sub(Value a, Value b) {
  Tape &tape = SameTape(a, b);
  RequireSameShape("sub", a.value(), b.value());
  Tensor out = a.value();
  out.AddScaled(b.value(), -1.0);
  int ai = a.id(), bi = b.id();
  return tape.Push(std::move(out), {ai, bi}, [ai, bi](Tape &t, int self) {
    const Tensor &g = t.grad(self);
    if (Tensor *ga = t.grad_slot(ai)) ga->AddScaled(g);
    if (Tensor *gb = t.grad_slot(bi)) gb->AddScaled(g, -1.0);
  });
}

Value Sum(std::span<const Value> values) {
  if (values.empty()) throw ShapeError("sum: no operands");
  Tape &tape = *values[0].tape();
  Tensor out = values[0].value();
  std::vector<int> ids{values[0].id()};
  for (std::size_t i = 1; i < values.size(); ++i) {
    SameTape(values[0], values[i]);
    RequireSameShape("sum", out, values[i].value());
    out.AddScaled(values[i].value());
    ids.push_back(values[i].id());
  }
  return tape.Push(std::move(out), ids, [ids](Tape &t, int self) {
    const Tensor &g = t.grad(self);
    for (int id : ids) {
      if (Tensor *gi = t.grad_slot(id)) gi->AddScaled(g);
    }
  });
}

Value Concat(Value a, Value b) {
  Value pair[2] = {a, b};
  return Concat(std::span<const Value>(pair));
}

Value Concat(std::span<const Value> values) {
  if (values.empty()) throw ShapeError("concat: no operands");
  Tape &tape = *values[0].tape();
  std::vector<double> data;
  std::vector<int> ids;
  std::vector<std::size_t> sizes;
  for (const Value &v : values) {
    SameTape(values[0], v);
    RequireVector("concat", v.value());
    auto d = v.value().data();
    data.insert(data.end(), d.begin(), d.end());
    ids.push_back(v.id());
    sizes.push_back(d.size());
  }
  return tape.Push(Tensor::Vector(std::move(data)), ids,
                   [ids, sizes](Tape &t, int self) {
                     const Tensor &g = t.grad(self);
                     std::size_t offset = 0;
                     for (std::size_t k = 0; k < ids.size(); ++k) {
                       if (Tensor *gi = t.grad_slot(ids[k])) {
                         for (std::size_t j = 0; j < sizes[k]; ++j) {
                           (*gi)[j] += g[offset + j];
                         }
                       }
                       offset += sizes[k];
                     }
                   });
}

Value Hadamard(Value a, Value b) {
  Tape &tape = SameTape(a, b);
  RequireSameShape("hadamard", a.value(), b.value());
  Tensor out = a.value();
  const Tensor &bt = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bt[i];
  int ai = a.id(), bi = b.id();
  return tape.Push(std::move(out), {ai, bi}, [ai, bi](Tape &t, int self) {
    const Tensor &g = t.grad(self);
    const Tensor &av = t.value(ai);
    const Tensor &bv = t.value(bi);
    if (Tensor *ga = t.grad_slot(ai)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * bv[i];
    }
    if (Tensor *gb = t.grad_slot(bi)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * av[i];
    }
  });
}

Value Sigmoid(Value a) {
  Tensor out = a.value();
  for (double &v : out.data()) v = StableSigmoid(v);
  int ai = a.id();
  return a.tape()->Push(std::move(out), {ai}, [ai](Tape &t, int self) {
    const Tensor &g = t.grad(self);
    const Tensor &y = t.value(self);
    if (Tensor *ga = t.grad_slot(ai)) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        (*ga)[i] += g[i] * y[i] * (1.0 - y[i]);
      }
    }
  });
}

Value Tanh(Value a) {
  Tensor out = a.value();
  for (double &v : out.data()) v = std::tanh(v);
  int ai = a.id();
  return a.tape()->Push(std::move(out), {ai}, [ai](Tape &t, int self) {
    const Tensor &g = t.grad(self);
    const Tensor &y = t.value(self);
    if (Tensor *ga = t.grad_slot(ai)) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        (*ga)[i] += g[i] * (1.0 - y[i] * y[i]);
      }
    }
  });
}

Value Dot(Value a, Value b) {
  Tape &tape = SameTape(a, b);
  RequireSameShape("dot", a.value(), b.value());
  const Tensor &at = a.value();
  const Tensor &bt = b.value();
  double sum = 0.0;
  for (std::size_t i = 0; i < at.size(); ++i) sum += at[i] * bt[i];
  int ai = a.id(), bi = b.id();
  return tape.Push(Tensor::Scalar(sum), {ai, bi}, [ai, bi](Tape &t, int self) {
    const double g = t.grad(self)[0];
    const Tensor &av = t.value(ai);
    const Tensor &bv = t.value(bi);
    if (Tensor *ga = t.grad_slot(ai)) ga->AddScaled(bv, g);
    if (Tensor *gb = t.grad_slot(bi)) gb->AddScaled(av, g);
  });
}

Value LogSumExp(Value a) {
  const Tensor &at = a.value();
  RequireVector("logsumexp", at);
  if (at.empty()) throw ShapeError("logsumexp: empty vector");
  const double mx = *std::max_element(at.data().begin(), at.data().end());
  double result = mx;
  if (std::isfinite(mx)) {
    double sum = 0.0;
    for (double v : at.data()) sum += std::exp(v - mx);
    result = mx + std::log(sum);
  }
  int ai = a.id();
  return a.tape()->Push(Tensor::Scalar(result), {ai}, [ai](Tape &t, int self) {
    const double g = t.grad(self)[0];
    const double lse = t.value(self)[0];
    const Tensor &av = t.value(ai);
    if (Tensor *ga = t.grad_slot(ai)) {
      for (std::size_t i = 0; i < av.size(); ++i) {
        (*ga)[i] += g * std::exp(av[i] - lse);
      }
    }
  });
}

Value Scale(Value a, double k) {
  Tensor out = a.value();
  for (double &v : out.data()) v *= k;
  int ai = a.id();
  return a.tape()->Push(std::move(out), {ai}, [ai, k](Tape &t, int self) {
    if (Tensor *ga = t.grad_slot(ai)) ga->AddScaled(t.grad(self), k);
  });
}

Value Select(Value v, std::size_t index) {
  const Tensor &vt = v.value();
  RequireVector("select", vt);
  if (index >= vt.size()) {
    throw ShapeError("select: index " + std::to_string(index) +
                     " out of range for " + ShapeString(vt.shape()));
  }
  int vi = v.id();
  return v.tape()->Push(Tensor::Scalar(vt[index]), {vi},
                        [vi, index](Tape &t, int self) {
                          if (Tensor *gv = t.grad_slot(vi)) {
                            (*gv)[index] += t.grad(self)[0];
                          }
                        });
}

Value Gather(Value v, std::span<const std::size_t> indices) {
  const Tensor &vt = v.value();
  RequireVector("gather", vt);
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t index : indices) {
    if (index >= vt.size()) {
      throw ShapeError("gather: index " + std::to_string(index) +
                       " out of range for " + ShapeString(vt.shape()));
    }
    out.push_back(vt[index]);
  }
  int vi = v.id();
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return v.tape()->Push(Tensor::Vector(std::move(out)), {vi},
                        [vi, idx](Tape &t, int self) {
                          const Tensor &g = t.grad(self);
                          if (Tensor *gv = t.grad_slot(vi)) {
                            for (std::size_t j = 0; j < idx.size(); ++j) {
                              (*gv)[idx[j]] += g[j];
                            }
                          }
                        });
}

Value SquaredNorm(Value a) {
  double sum = a.value().SquaredNorm();
  int ai = a.id();
  return a.tape()->Push(Tensor::Scalar(sum), {ai}, [ai](Tape &t, int self) {
    if (Tensor *ga = t.grad_slot(ai)) {
      ga->AddScaled(t.value(ai), 2.0 * t.grad(self)[0]);
    }
  });
}

}  // namespace ate
