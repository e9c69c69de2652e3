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


// Mini-batch training with early stopping on validation span F1.
//
// Each epoch shuffles the training set with the run seed, walks it in
// batches of config.batch_size (the last short batch is kept), and for every
// batch sums the per-sentence losses plus the L2 term, backpropagates, clips
// the global gradient norm and takes one Adam step.
//
// Sentences of a batch are processed on up to `workers` threads, one tape
// per sentence. Tape gradients are added to the batch gradient in sentence
// order, so the result does not depend on the worker count. Dropout masks for
// sentence k in epoch e come from a generator seeded with (seed, e, k).

#ifndef ATE_TRAINER_H_
#define ATE_TRAINER_H_

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ate/corpus.h"
#include "ate/model.h"

namespace ate {

struct TrainOptions {
  int workers = 1;
  // Longer training sentences are skipped with a warning.
  int max_sentence_length = 200;
  // Per-epoch progress and warnings; nullptr for silence.
  std::ostream *log = nullptr;
};

struct TrainHistory {
  std::vector<double> train_loss;  // mean batch objective per sentence
  std::vector<double> dev_f1;
  int best_epoch = 0;  // 1-based
  double best_dev_f1 = 0.0;
  std::string stop_reason;  // "patience" or "max_epochs"
  long skipped_sentences = 0;

  bool operator==(const TrainHistory &) const = default;
};

// Trains `model` in place and leaves it at the best validation epoch.
// Throws DataError for an empty or unlabeled training set and NumericError
// when the loss or a gradient becomes non-finite.
TrainHistory Train(Model &model, std::span<const Sentence> train,
                   std::span<const Sentence> dev, const TrainOptions &options);

// Generator for the dropout masks of one sentence.
Rng DropoutRng(std::uint64_t seed, int epoch, std::size_t sentence);

}  // namespace ate

#endif  // ATE_TRAINER_H_
