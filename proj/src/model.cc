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

#include "ate/model.h"

#include <stdexcept>
#include <string>

#include "ate/errors.h"

namespace ate {

int Model::tree_output_dim() const {
  if (!tree) return 0;
  return (tree->up && tree->down) ? 2 * config.dim : config.dim;
}

Model BuildModel(const ModelConfig &config, Vocabulary vocab,
                 const EmbeddingTable &embeddings) {
  config.Validate();
  const auto d = static_cast<std::size_t>(config.dim);
  if (embeddings.matrix.rank() != 2 || embeddings.matrix.cols() != d) {
    throw std::invalid_argument(
        "embedding dimension " + ShapeString(embeddings.matrix.shape()) +
        " does not match dim " + std::to_string(config.dim));
  }
  if (embeddings.matrix.rows() != static_cast<std::size_t>(vocab.words().size())) {
    throw std::invalid_argument("embedding table has " +
                                std::to_string(embeddings.matrix.rows()) +
                                " rows for a vocabulary of " +
                                std::to_string(vocab.words().size()));
  }

  Model model;
  model.config = config;
  model.vocab = std::move(vocab);
  Rng rng(config.seed);

  Parameter &emb = model.params.Add("embeddings", "embeddings",
                                    embeddings.matrix.shape(), true);
  emb.value = embeddings.matrix;
  model.embeddings = &emb;

  if (config.has_tree()) {
    BiDTreeShape shape;
    shape.dim = config.dim;
    shape.variant = config.variant;
    shape.use_relation_terms = config.use_relation_terms;
    shape.up_relations = model.vocab.up_relations().size();
    shape.down_relations = model.vocab.down_relations().size();
    shape.bottom_up = config.has_bottom_up();
    shape.top_down = config.has_top_down();
    model.tree = CreateBiDTreeParams(model.params, shape, rng);
  }
  const int tree_out = model.tree_output_dim();
  int projection_in = tree_out;
  if (config.has_lstm()) {
    const int lstm_in = model.tree ? tree_out : config.dim;
    model.lstm = CreateSeqLstmParams(model.params, lstm_in, config.dim, rng);
    projection_in = 2 * config.dim;
  }
  model.projection =
      CreateProjectionParams(model.params, projection_in, kNumLabels, rng);
  model.crf = CreateCrfParams(model.params, rng);
  return model;
}

EncodedSentence EncodeSentence(const Model &model, const Sentence &sentence,
                               UnknownCounts *unknown) {
  EncodedSentence enc;
  enc.sentence = &sentence;
  const Vocabulary &vocab = model.vocab;
  for (const Token &t : sentence.tokens) {
    const int word = vocab.WordId(t.surface);
    if (unknown && !vocab.words().Contains(t.surface)) ++unknown->words;
    enc.words.push_back(word);
    if (t.head == 0) {
      enc.up_relations.push_back(vocab.UpRelationId(t.relation));
      enc.down_relations.push_back(vocab.DownRootId());
      continue;
    }
    if (unknown && !vocab.up_relations().Contains(t.relation)) {
      ++unknown->relations;
    }
    enc.up_relations.push_back(vocab.UpRelationId(t.relation));
    enc.down_relations.push_back(vocab.DownRelationId(t.relation));
  }
  return enc;
}

std::vector<EncodedSentence> EncodeCorpus(const Model &model,
                                          std::span<const Sentence> corpus,
                                          UnknownCounts *unknown) {
  std::vector<EncodedSentence> out;
  out.reserve(corpus.size());
  for (const Sentence &s : corpus) out.push_back(EncodeSentence(model, s, unknown));
  return out;
}

namespace {

// Inverted dropout: keep with probability 1 - rate, scale kept units by
// 1 / (1 - rate).
Value Dropout(Tape &tape, Value v, double rate, Rng &rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  Tensor mask(v.value().shape());
  const double scale = 1.0 / (1.0 - rate);
  for (double &m : mask.data()) m = keep(rng) ? scale : 0.0;
  return Hadamard(v, tape.Constant(std::move(mask)));
}

}  // namespace

std::vector<Value> ComputeFeatures(Tape &tape, const Model &model,
                                   const EncodedSentence &sentence,
                                   Rng *dropout_rng) {
  const Sentence &s = *sentence.sentence;
  if (s.size() == 0) throw DataError(s.id, 0, "empty sentence");
  const bool dropout = dropout_rng != nullptr && model.config.dropout > 0.0;
  auto maybe_drop = [&](Value v) {
    return dropout ? Dropout(tape, v, model.config.dropout, *dropout_rng) : v;
  };

  std::vector<Value> words;
  words.reserve(sentence.words.size());
  for (int id : sentence.words) {
    words.push_back(tape.Row(*model.embeddings, static_cast<std::size_t>(id)));
  }

  std::vector<Value> hidden = words;
  if (model.tree) {
    hidden = BiDTreeEncode(tape, *model.tree, s.tree, words,
                           sentence.up_relations, sentence.down_relations);
    for (Value &h : hidden) h = maybe_drop(h);
  }
  if (model.lstm) {
    hidden = BiLstm(tape, *model.lstm, hidden);
    for (Value &g : hidden) g = maybe_drop(g);
  }
  std::vector<Value> features;
  features.reserve(hidden.size());
  for (Value g : hidden) features.push_back(Project(tape, model.projection, g));
  return features;
}

Value SentenceLoss(Tape &tape, const Model &model,
                   const EncodedSentence &sentence, Rng *dropout_rng) {
  const Sentence &s = *sentence.sentence;
  if (!s.labeled()) {
    throw DataError(s.id, 0, "sentence " + s.id + " has no labels");
  }
  std::vector<Value> features = ComputeFeatures(tape, model, sentence, dropout_rng);
  std::vector<Label> labels = s.labels();
  return Scale(LogLikelihood(tape, model.crf, features, labels), -1.0);
}

Value L2Penalty(Tape &tape, const Model &model) {
  std::vector<Value> terms;
  for (const auto &p : model.params) {
    if (p->regularized) terms.push_back(SquaredNorm(tape.Param(*p)));
  }
  if (terms.empty()) return tape.Constant(Tensor::Scalar(0.0));
  return Scale(Sum(terms), model.config.l2 / 2.0);
}

Value ForwardLoss(Tape &tape, const Model &model,
                  std::span<const EncodedSentence> batch, Rng *dropout_rng) {
  std::vector<Value> terms;
  terms.reserve(batch.size() + 1);
  for (const EncodedSentence &s : batch) {
    terms.push_back(SentenceLoss(tape, model, s, dropout_rng));
  }
  terms.push_back(L2Penalty(tape, model));
  return Sum(terms);
}

std::vector<Label> PredictLabels(const Model &model,
                                 const EncodedSentence &sentence) {
  if (sentence.sentence->size() == 0) return {};
  Tape tape;
  std::vector<Value> features = ComputeFeatures(tape, model, sentence);
  FeatureSeq plain;
  plain.reserve(features.size());
  for (Value f : features) plain.push_back(f.value().values());
  return Viterbi(model.crf, plain).labels;
}

std::vector<std::vector<AspectSpan>> Predict(const Model &model,
                                             std::span<const Sentence> corpus) {
  std::vector<std::vector<AspectSpan>> out;
  out.reserve(corpus.size());
  for (const Sentence &s : corpus) {
    EncodedSentence enc = EncodeSentence(model, s);
    std::vector<std::string> surfaces = s.surfaces();
    out.push_back(DecodeSpans(PredictLabels(model, enc), surfaces));
  }
  return out;
}

EvalReport Evaluate(const Model &model, std::span<const Sentence> corpus) {
  SpanCounts total;
  for (const Sentence &s : corpus) {
    if (!s.labeled()) {
      throw DataError(s.id, 0, "sentence " + s.id + " has no labels");
    }
    std::vector<std::string> surfaces = s.surfaces();
    std::vector<Label> gold_labels = s.labels();
    auto gold = DecodeSpans(gold_labels, surfaces);
    EncodedSentence enc = EncodeSentence(model, s);
    auto predicted = DecodeSpans(PredictLabels(model, enc), surfaces);
    total += CountMatches(gold, predicted);
  }
  return ReportFromCounts(total);
}

}  // namespace ate
