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

// The assembled tagger: word embeddings -> dependency-tree LSTM -> BiLSTM ->
// projection -> CRF, with the ablations of ModelConfig removing stages.
//
// Training objective for a batch B:
//
//   J = sum_{s in B} -log p(y_s | g_s) + (l2 / 2) * ||Theta||^2
//
// where Theta covers every matrix, the relation embeddings and the word
// embeddings, but not the biases.

#ifndef ATE_MODEL_H_
#define ATE_MODEL_H_

#include <optional>
#include <span>
#include <vector>

#include "ate/bidtree.h"
#include "ate/config.h"
#include "ate/corpus.h"
#include "ate/crf.h"
#include "ate/parameters.h"
#include "ate/sequence.h"
#include "ate/spans.h"
#include "ate/tape.h"
#include "ate/vocabulary.h"

namespace ate {

class Model {
 public:
  Model() = default;
  Model(const Model &) = delete;
  Model &operator=(const Model &) = delete;
  Model(Model &&) = default;
  Model &operator=(Model &&) = default;

  ModelConfig config;
  Vocabulary vocab;
  ParameterSet params;

  const Parameter *embeddings = nullptr;
  std::optional<BiDTreeParams> tree;
  std::optional<SeqLstmParams> lstm;
  ProjectionParams projection;
  CrfParams crf;

  // Width of the tree output (0 without a tree).
  int tree_output_dim() const;
};

// Creates all parameters. The word embedding parameter starts as a copy of
// `embeddings`; everything else is drawn from config.seed. Throws
// std::invalid_argument when dimensions disagree.
Model BuildModel(const ModelConfig &config, Vocabulary vocab,
                 const EmbeddingTable &embeddings);

// A sentence mapped to the model's ids.
struct EncodedSentence {
  const Sentence *sentence = nullptr;
  std::vector<int> words;
  std::vector<int> up_relations;
  std::vector<int> down_relations;  // root carries the virtual root relation
};

struct UnknownCounts {
  long words = 0;
  long relations = 0;
};

EncodedSentence EncodeSentence(const Model &model, const Sentence &sentence,
                               UnknownCounts *unknown = nullptr);
std::vector<EncodedSentence> EncodeCorpus(const Model &model,
                                          std::span<const Sentence> corpus,
                                          UnknownCounts *unknown = nullptr);

// Per-token label scores (length kNumLabels each). Dropout is applied only
// when `dropout_rng` is given and the configured rate is positive.
std::vector<Value> ComputeFeatures(Tape &tape, const Model &model,
                                   const EncodedSentence &sentence,
                                   Rng *dropout_rng = nullptr);

// -log p(y | g). Throws DataError for an unlabeled sentence.
Value SentenceLoss(Tape &tape, const Model &model,
                   const EncodedSentence &sentence, Rng *dropout_rng = nullptr);

// (l2 / 2) * sum of squared regularized parameters.
Value L2Penalty(Tape &tape, const Model &model);

// Batch objective J on one tape.
Value ForwardLoss(Tape &tape, const Model &model,
                  std::span<const EncodedSentence> batch,
                  Rng *dropout_rng = nullptr);

// Viterbi labels with dropout off.
std::vector<Label> PredictLabels(const Model &model,
                                 const EncodedSentence &sentence);
std::vector<std::vector<AspectSpan>> Predict(const Model &model,
                                             std::span<const Sentence> corpus);

// Corpus-level micro scores. Throws DataError for unlabeled sentences.
EvalReport Evaluate(const Model &model, std::span<const Sentence> corpus);

}  // namespace ate

#endif  // ATE_MODEL_H_
