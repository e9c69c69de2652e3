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


#include "ate/synthetic.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "ate/parameters.h"

namespace ate {
namespace {

const std::vector<std::vector<std::string>> kAspects = {
    {"screen"},  {"keyboard"}, {"price"},   {"food"},     {"staff"},
    {"menu"},    {"battery", "life"},       {"hard", "disc"},
    {"wine", "list"},          {"delivery", "time"},
};
const std::vector<std::string> kAdjectives = {"great", "terrible", "fast",
                                              "slow",  "cheap",    "fresh"};

const std::vector<std::string> kRelations = {
    "nsubj", "dobj", "det", "amod", "case", "nmod", "conj", "cc", "compound"};

template <typename T>
const T &Pick(const std::vector<T> &items, Rng &rng) {
  std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
  return items[dist(rng)];
}

class Builder {
 public:
  int Word(const std::string &surface, Label label = Label::kOutside) {
    surfaces_.push_back(surface);
    labels_.push_back(label);
    heads_.push_back(0);
    relations_.push_back("root");
    return static_cast<int>(surfaces_.size());
  }

  void Attach(int node, int head, const std::string &relation) {
    heads_[node - 1] = head;
    relations_[node - 1] = relation;
  }

  // Adds an aspect phrase; its last word is the phrase head and modifiers
  // attach to it as compounds.
  int Aspect(const std::vector<std::string> &words) {
    std::vector<int> nodes;
    for (std::size_t k = 0; k < words.size(); ++k) {
      nodes.push_back(
          Word(words[k], k == 0 ? Label::kBeginAspect : Label::kInsideAspect));
    }
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      Attach(nodes[k], nodes.back(), "compound");
    }
    return nodes.back();
  }

  Sentence Build(std::string id) {
    return MakeSentence(std::move(id), surfaces_, heads_, relations_, labels_);
  }

 private:
  std::vector<std::string> surfaces_;
  std::vector<int> heads_;
  std::vector<std::string> relations_;
  std::vector<Label> labels_;
};

Sentence Template(int kind, const std::string &id, Rng &rng) {
  Builder b;
  switch (kind) {
    case 0: {  // the A is ADJ
      int det = b.Word("the");
      int a = b.Aspect(Pick(kAspects, rng));
      int cop = b.Word("is");
      int adj = b.Word(Pick(kAdjectives, rng));
      b.Attach(det, a, "det");
      b.Attach(a, adj, "nsubj");
      b.Attach(cop, adj, "cop");
      break;
    }
    case 1: {  // I love the A
      int subj = b.Word("I");
      int verb = b.Word("love");
      int det = b.Word("the");
      int a = b.Aspect(Pick(kAspects, rng));
      b.Attach(subj, verb, "nsubj");
      b.Attach(det, a, "det");
      b.Attach(a, verb, "dobj");
      break;
    }
    case 2: {  // the A and the B are ADJ
      int det1 = b.Word("the");
      int a = b.Aspect(Pick(kAspects, rng));
      int cc = b.Word("and");
      int det2 = b.Word("the");
      int c = b.Aspect(Pick(kAspects, rng));
      int cop = b.Word("are");
      int adj = b.Word(Pick(kAdjectives, rng));
      b.Attach(det1, a, "det");
      b.Attach(a, adj, "nsubj");
      b.Attach(cc, a, "cc");
      b.Attach(det2, c, "det");
      b.Attach(c, a, "conj");
      b.Attach(cop, adj, "cop");
      break;
    }
    case 3: {  // it has a ADJ A
      int subj = b.Word("it");
      int verb = b.Word("has");
      int det = b.Word("a");
      int adj = b.Word(Pick(kAdjectives, rng));
      int a = b.Aspect(Pick(kAspects, rng));
      b.Attach(subj, verb, "nsubj");
      b.Attach(det, a, "det");
      b.Attach(adj, a, "amod");
      b.Attach(a, verb, "dobj");
      break;
    }
    case 4: {  // we waited for the A
      int subj = b.Word("we");
      int verb = b.Word("waited");
      int prep = b.Word("for");
      int det = b.Word("the");
      int a = b.Aspect(Pick(kAspects, rng));
      b.Attach(subj, verb, "nsubj");
      b.Attach(prep, a, "case");
      b.Attach(det, a, "det");
      b.Attach(a, verb, "nmod");
      break;
    }
    default: {  // nothing was ADJ today
      int subj = b.Word("nothing");
      int cop = b.Word("was");
      int adj = b.Word(Pick(kAdjectives, rng));
      int when = b.Word("today");
      b.Attach(subj, adj, "nsubj");
      b.Attach(cop, adj, "cop");
      b.Attach(when, adj, "tmod");
      break;
    }
  }
  return b.Build(id);
}

}  // namespace

std::vector<Sentence> TemplateCorpus(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sentence> corpus;
  for (int k = 0; k < count; ++k) {
    corpus.push_back(Template(k % 6, "syn-" + std::to_string(k + 1), rng));
  }
  return corpus;
}

Sentence BranchingSentence() {
  return MakeSentence(
      "fixture", {"the", "hard", "disc", "is", "great"}, {3, 3, 5, 5, 0},
      {"det", "compound", "nsubj", "cop", "root"},
      {Label::kOutside, Label::kBeginAspect, Label::kInsideAspect,
       Label::kOutside, Label::kOutside});
}

std::vector<int> RandomHeads(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 1);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::vector<int> heads(n, 0);
  // nodes[0] is the root; every later node hangs off an earlier one.
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> parent(0, k - 1);
    heads[nodes[k] - 1] = nodes[parent(rng)];
  }
  return heads;
}

std::vector<Sentence> RandomCorpus(int count, int min_length, int max_length,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> length(min_length, max_length);
  std::uniform_int_distribution<int> word(0, 19);
  std::uniform_int_distribution<int> label(0, 2);
  std::vector<Sentence> corpus;
  for (int k = 0; k < count; ++k) {
    const int n = length(rng);
    std::vector<std::string> surfaces;
    std::vector<std::string> relations;
    std::vector<Label> labels;
    for (int i = 0; i < n; ++i) {
      surfaces.push_back("w" + std::to_string(word(rng)));
      relations.push_back(Pick(kRelations, rng));
      Label l = static_cast<Label>(label(rng));
      if (l == Label::kInsideAspect &&
          (labels.empty() || labels.back() == Label::kOutside)) {
        l = Label::kBeginAspect;
      }
      labels.push_back(l);
    }
    std::vector<int> heads = RandomHeads(n, rng());
    for (int i = 0; i < n; ++i) {
      if (heads[i] == 0) relations[i] = "root";
    }
    corpus.push_back(MakeSentence("rand-" + std::to_string(k + 1), surfaces,
                                  heads, relations, labels));
  }
  return corpus;
}

}  // namespace ate
