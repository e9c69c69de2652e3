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

// Dependency-parsed, BIO-labeled sentences and their column file format.
//
// One token per line, TAB-separated:
//
//   INDEX  SURFACE  HEAD  RELATION  [LABEL]
//
// INDEX counts from 1, HEAD is 0 for the root, LABEL is one of B-AP, I-AP,
// O. A blank line ends a sentence. Lines starting with '#' are comments;
// "# sent_id = X" names the following sentence.

#ifndef ATE_CORPUS_H_
#define ATE_CORPUS_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ate {

enum class Label : int { kBeginAspect = 0, kInsideAspect = 1, kOutside = 2 };
inline constexpr int kNumLabels = 3;

std::string_view LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view text);

// Prefix marking relations seen from the dependent towards its head.
inline constexpr std::string_view kInversePrefix = "I-";
// Relation of the virtual ROOT above the root word in the top-down pass.
inline constexpr std::string_view kInverseRootRelation = "I-root";

std::string InverseRelation(std::string_view relation);

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  int head = 0;  // 0 = virtual ROOT
  std::string relation;
  std::optional<Label> label;

  bool operator==(const Token &) const = default;
};

enum class TreeErrorKind {
  kOk,
  kHeadOutOfRange,
  kSelfLoop,
  kNoRoot,
  kMultipleRoots,
  kCycle,
};

struct TreeCheck {
  TreeErrorKind kind = TreeErrorKind::kOk;
  std::vector<int> nodes;  // offending 1-based indices, ascending
  std::string message;

  bool ok() const { return kind == TreeErrorKind::kOk; }
};

// Checks head links (heads[i] is the head of node i + 1) for a single-rooted
// tree: heads in range, no self loops, exactly one root, no cycles.
TreeCheck ValidateHeads(std::span<const int> heads);

// A validated dependency tree over nodes 1..N. Node 0 is the virtual ROOT.
class DepTree {
 public:
  DepTree() = default;

  // Throws DataError (line 0) when the heads do not form a tree.
  static DepTree FromHeads(std::vector<int> heads);

  int size() const { return static_cast<int>(heads_.size()); }
  int root() const { return root_; }
  int head(int node) const { return heads_[node - 1]; }
  // Dependents of `node` in ascending order; children(0) = {root}.
  const std::vector<int> &children(int node) const { return children_[node]; }

  // Post-order walk from the root visiting children in ascending order: every
  // node comes after all of its dependents.
  std::vector<int> BottomUpOrder() const;
  // Pre-order walk from the root: every node comes after its head.
  std::vector<int> TopDownOrder() const;

 private:
  std::vector<int> heads_;
  std::vector<std::vector<int>> children_;
  int root_ = 0;
};

TreeCheck ValidateTree(const DepTree &tree);

struct Sentence {
  std::string id;
  std::vector<Token> tokens;
  DepTree tree;

  int size() const { return static_cast<int>(tokens.size()); }
  bool labeled() const;
  std::vector<Label> labels() const;
  std::vector<std::string> surfaces() const;

  bool operator==(const Sentence &other) const {
    return id == other.id && tokens == other.tokens;
  }
};

// Parses a corpus stream. `source` names the stream in error messages.
// Throws DataError with the line number of the first problem.
std::vector<Sentence> ParseCorpus(std::istream &in,
                                  const std::string &source = "");
std::vector<Sentence> ReadCorpusFile(const std::string &path);

void WriteCorpus(std::ostream &out, std::span<const Sentence> sentences);

// Builds a sentence from parallel columns; used by generators and tests.
Sentence MakeSentence(std::string id, std::vector<std::string> surfaces,
                      std::vector<int> heads,
                      std::vector<std::string> relations,
                      std::vector<Label> labels = {});

}  // namespace ate

#endif  // ATE_CORPUS_H_
