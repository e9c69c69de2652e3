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

#include "ate/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "ate/errors.h"

namespace ate {

std::string_view LabelName(Label label) {
  switch (label) {
    case Label::kBeginAspect:
      return "B-AP";
    case Label::kInsideAspect:
      return "I-AP";
    case Label::kOutside:
      return "O";
  }
  return "?";
}

std::optional<Label> ParseLabel(std::string_view text) {
  if (text == "B-AP") return Label::kBeginAspect;
  if (text == "I-AP") return Label::kInsideAspect;
  if (text == "O") return Label::kOutside;
  return std::nullopt;
}

std::string InverseRelation(std::string_view relation) {
  return std::string(kInversePrefix) + std::string(relation);
}

namespace {

std::string JoinNodes(const std::vector<int> &nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(nodes[i]);
  }
  return out;
}

TreeCheck Fail(TreeErrorKind kind, std::vector<int> nodes,
               const std::string &what) {
  std::sort(nodes.begin(), nodes.end());
  TreeCheck check;
  check.kind = kind;
  check.message = what + " {" + JoinNodes(nodes) + "}";
  check.nodes = std::move(nodes);
  return check;
}

}  // namespace

TreeCheck ValidateHeads(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int i = 1; i <= n; ++i) {
    const int h = heads[i - 1];
    if (h < 0 || h > n) return Fail(TreeErrorKind::kHeadOutOfRange, {i},
                                    "head out of range at node");
    if (h == i) return Fail(TreeErrorKind::kSelfLoop, {i}, "self-loop at node");
  }
  std::vector<int> roots;
  for (int i = 1; i <= n; ++i) {
    if (heads[i - 1] == 0) roots.push_back(i);
  }
  if (n > 0 && roots.empty()) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i + 1;
    return Fail(TreeErrorKind::kNoRoot, all, "no root; unreachable nodes");
  }
  if (roots.size() > 1) {
    return Fail(TreeErrorKind::kMultipleRoots, roots, "multiple roots");
  }

  // 0 = unvisited, 1 = on the current path, 2 = reaches the root.
  std::vector<int> state(n + 1, 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int node = start;
    while (state[node] == 0) {
      state[node] = 1;
      path.push_back(node);
      node = heads[node - 1];
    }
    if (state[node] == 1) {
      auto first = std::find(path.begin(), path.end(), node);
      return Fail(TreeErrorKind::kCycle, std::vector<int>(first, path.end()),
                  "cycle through nodes");
    }
    for (int p : path) state[p] = 2;
  }
  return {};
}

DepTree DepTree::FromHeads(std::vector<int> heads) {
  TreeCheck check = ValidateHeads(heads);
  if (!check.ok()) throw DataError("", 0, check.message);
  DepTree tree;
  const int n = static_cast<int>(heads.size());
  tree.children_.assign(n + 1, {});
  for (int i = 1; i <= n; ++i) {
    tree.children_[heads[i - 1]].push_back(i);
    if (heads[i - 1] == 0) tree.root_ = i;
  }
  tree.heads_ = std::move(heads);
  return tree;
}

std::vector<int> DepTree::BottomUpOrder() const {
  std::vector<int> order;
  if (root_ == 0) return order;
  order.reserve(heads_.size());
  // Iterative post-order: (node, next child position).
  std::vector<std::pair<int, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < children_[node].size()) {
      int child = children_[node][next++];
      stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;
}

std::vector<int> DepTree::TopDownOrder() const {
  std::vector<int> order;
  if (root_ == 0) return order;
  order.reserve(heads_.size());
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    order.push_back(node);
    const auto &kids = children_[node];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

TreeCheck ValidateTree(const DepTree &tree) {
  std::vector<int> heads(tree.size());
  for (int i = 1; i <= tree.size(); ++i) heads[i - 1] = tree.head(i);
  return ValidateHeads(heads);
}

bool Sentence::labeled() const {
  return !tokens.empty() && std::all_of(tokens.begin(), tokens.end(),
                                        [](const Token &t) {
                                          return t.label.has_value();
                                        });
}

std::vector<Label> Sentence::labels() const {
  std::vector<Label> out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) out.push_back(t.label.value_or(Label::kOutside));
  return out;
}

std::vector<std::string> Sentence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) out.push_back(t.surface);
  return out;
}

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool ParseInt(std::string_view text, int &out) {
  const char *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

class CorpusParser {
 public:
  explicit CorpusParser(const std::string &source) : source_(source) {}

  void Line(std::string_view line, int line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) {
      Flush();
      return;
    }
    if (line.front() == '#') {
      std::string_view body = Trim(line.substr(1));
      constexpr std::string_view kKey = "sent_id";
      if (body.starts_with(kKey)) {
        body = Trim(body.substr(kKey.size()));
        if (!body.empty() && body.front() == '=') {
          pending_id_ = std::string(Trim(body.substr(1)));
        }
      }
      return;
    }
    AddToken(line, line_no);
  }

  std::vector<Sentence> Finish() {
    Flush();
    return std::move(sentences_);
  }

 private:
  [[noreturn]] void Error(int line_no, const std::string &message) const {
    throw DataError(source_, line_no, message);
  }

  void AddToken(std::string_view line, int line_no) {
    auto fields = SplitTabs(line);
    if (fields.size() != 4 && fields.size() != 5) {
      Error(line_no, "malformed line: expected 4 or 5 TAB-separated columns, "
                     "got " + std::to_string(fields.size()));
    }
    Token token;
    if (!ParseInt(fields[0], token.index)) {
      Error(line_no, "bad token index '" + std::string(fields[0]) + "'");
    }
    const int expected = static_cast<int>(tokens_.size()) + 1;
    if (token.index != expected) {
      Error(line_no, "token index " + std::to_string(token.index) +
                         ", expected " + std::to_string(expected));
    }
    if (fields[1].empty()) Error(line_no, "empty surface form");
    token.surface = std::string(fields[1]);
    if (!ParseInt(fields[2], token.head)) {
      Error(line_no, "bad head '" + std::string(fields[2]) + "'");
    }
    if (fields[3].empty()) Error(line_no, "empty relation");
    if (fields[3].starts_with(kInversePrefix)) {
      Error(line_no, "relation '" + std::string(fields[3]) +
                         "' uses the reserved prefix " +
                         std::string(kInversePrefix));
    }
    token.relation = std::string(fields[3]);
    if (fields.size() == 5) {
      token.label = ParseLabel(fields[4]);
      if (!token.label) {
        Error(line_no, "invalid label '" + std::string(fields[4]) +
                           "' (expected B-AP, I-AP or O)");
      }
    }
    if (!tokens_.empty() && tokens_[0].label.has_value() != token.label.has_value()) {
      Error(line_no, "label column present on some tokens of the sentence only");
    }
    tokens_.push_back(std::move(token));
    lines_.push_back(line_no);
  }

  void Flush() {
    if (tokens_.empty()) return;
    std::vector<int> heads;
    heads.reserve(tokens_.size());
    for (const auto &t : tokens_) heads.push_back(t.head);
    TreeCheck check = ValidateHeads(heads);
    if (!check.ok()) Error(lines_[check.nodes.front() - 1], check.message);

    Sentence sentence;
    sentence.id = pending_id_.empty()
                      ? std::to_string(sentences_.size() + 1)
                      : pending_id_;
    sentence.tokens = std::move(tokens_);
    sentence.tree = DepTree::FromHeads(std::move(heads));
    sentences_.push_back(std::move(sentence));
    tokens_.clear();
    lines_.clear();
    pending_id_.clear();
  }

  std::string source_;
  std::vector<Sentence> sentences_;
  std::vector<Token> tokens_;
  std::vector<int> lines_;
  std::string pending_id_;
};

}  // namespace

std::vector<Sentence> ParseCorpus(std::istream &in, const std::string &source) {
  CorpusParser parser(source);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) parser.Line(line, ++line_no);
  return parser.Finish();
}

std::vector<Sentence> ReadCorpusFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open corpus file");
  return ParseCorpus(in, path);
}

void WriteCorpus(std::ostream &out, std::span<const Sentence> sentences) {
  for (const Sentence &s : sentences) {
    out << "# sent_id = " << s.id << "\n";
    for (const Token &t : s.tokens) {
      out << t.index << '\t' << t.surface << '\t' << t.head << '\t'
          << t.relation;
      if (t.label) out << '\t' << LabelName(*t.label);
      out << '\n';
    }
    out << '\n';
  }
}

Sentence MakeSentence(std::string id, std::vector<std::string> surfaces,
                      std::vector<int> heads,
                      std::vector<std::string> relations,
                      std::vector<Label> labels) {
  const std::size_t n = surfaces.size();
  if (heads.size() != n || relations.size() != n ||
      (!labels.empty() && labels.size() != n)) {
    throw DataError(id, 0, "column lengths differ");
  }
  Sentence s;
  s.id = std::move(id);
  for (std::size_t i = 0; i < n; ++i) {
    Token t;
    t.index = static_cast<int>(i) + 1;
    t.surface = std::move(surfaces[i]);
    t.head = heads[i];
    t.relation = std::move(relations[i]);
    if (!labels.empty()) t.label = labels[i];
    s.tokens.push_back(std::move(t));
  }
  s.tree = DepTree::FromHeads(std::move(heads));
  return s;
}

}  // namespace ate
