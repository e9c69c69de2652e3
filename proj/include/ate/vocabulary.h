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

#ifndef ATE_VOCABULARY_H_
#define ATE_VOCABULARY_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ate/corpus.h"
#include "ate/parameters.h"
#include "ate/tensor.h"

namespace ate {

// Dense string <-> id mapping. Id 0 is always the unknown entry.
class Index {
 public:
  Index() : Index("<unk>") {}
  explicit Index(std::string unknown);

  int Add(std::string_view entry);
  // Unknown strings map to 0.
  int Lookup(std::string_view entry) const;
  bool Contains(std::string_view entry) const;
  const std::string &name(int id) const { return entries_[id]; }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<std::string> &entries() const { return entries_; }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, int> ids_;
};

// Words plus the two relation inventories: `up` holds relations as written
// in the corpus (bottom-up pass), `down` their "I-"-prefixed inverses and
// the virtual root relation (top-down pass).
class Vocabulary {
 public:
  static constexpr std::string_view kUnknownWord = "<unk>";
  static constexpr std::string_view kUnknownRelation = "<unk>";

  Vocabulary();

  // Words come from every corpus given; relations from `relation_source`
  // only, so relations unseen in training map to the unknown entries.
  static Vocabulary Build(std::span<const Sentence> relation_source,
                          std::span<const std::span<const Sentence>> extra = {});

  static Vocabulary FromLists(const std::vector<std::string> &words,
                              const std::vector<std::string> &up,
                              const std::vector<std::string> &down);

  void AddWord(std::string_view word) { words_.Add(word); }
  void AddRelation(std::string_view relation);

  const Index &words() const { return words_; }
  const Index &up_relations() const { return up_; }
  const Index &down_relations() const { return down_; }

  int WordId(std::string_view word) const { return words_.Lookup(word); }
  int UpRelationId(std::string_view relation) const {
    return up_.Lookup(relation);
  }
  // Takes the forward relation and looks up its inverse.
  int DownRelationId(std::string_view relation) const {
    return down_.Lookup(InverseRelation(relation));
  }
  int DownRootId() const { return down_.Lookup(kInverseRootRelation); }

 private:
  Index words_;
  Index up_;
  Index down_;
};

// |V| x d word vectors; rows for words missing from the embedding file are
// randomly initialized and flagged.
struct EmbeddingTable {
  Tensor matrix;
  std::vector<bool> random_init;
  int oov_count = 0;  // vocabulary words (unknown entry excluded) not in file

  int dim() const { return static_cast<int>(matrix.cols()); }
};

// Half-width of the uniform init for vectors missing from the file.
double OovInitLimit(int dim);

// Reads "<count> <dim>" followed by "<word> <f1> ... <fd>" lines.
EmbeddingTable LoadEmbeddings(std::istream &in, const Vocabulary &vocab,
                              int dim, Rng &rng,
                              const std::string &source = "");
EmbeddingTable LoadEmbeddingsFile(const std::string &path,
                                  const Vocabulary &vocab, int dim, Rng &rng);
// Every row random.
EmbeddingTable RandomEmbeddings(const Vocabulary &vocab, int dim, Rng &rng);

}  // namespace ate

#endif  // ATE_VOCABULARY_H_
