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


#include "ate/trainer.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <numeric>
#include <random>
#include <thread>

#include "ate/errors.h"
#include "ate/optim.h"

namespace ate {

Rng DropoutRng(std::uint64_t seed, int epoch, std::size_t sentence) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch),
                    static_cast<std::uint32_t>(sentence),
                    static_cast<std::uint32_t>(sentence >> 32)};
  return Rng(seq);
}

namespace {

struct SentenceResult {
  std::unique_ptr<Tape> tape;
  double loss = 0.0;
  std::exception_ptr error;
};

// Forward and backward for one sentence on its own tape.
void RunSentence(const Model &model, const EncodedSentence &sentence,
                 int epoch, std::size_t index, SentenceResult &result) {
  try {
    result.tape = std::make_unique<Tape>();
    Rng rng = DropoutRng(model.config.seed, epoch, index);
    Value loss = SentenceLoss(*result.tape, model, sentence, &rng);
    result.loss = loss.scalar();
    result.tape->Backward(loss);
  } catch (...) {
    result.error = std::current_exception();
  }
}

class BatchRunner {
 public:
  BatchRunner(const Model &model, int workers)
      : model_(model), workers_(std::max(1, workers)) {}

  // Adds the gradients of every sentence in `indices` to `grads` in order and
  // returns the summed loss.
  double Run(std::span<const EncodedSentence> data,
             std::span<const std::size_t> indices, int epoch,
             Gradients &grads) {
    double total = 0.0;
    for (std::size_t start = 0; start < indices.size(); start += workers_) {
      const std::size_t count =
          std::min<std::size_t>(workers_, indices.size() - start);
      std::vector<SentenceResult> results(count);
      if (count == 1) {
        RunSentence(model_, data[indices[start]], epoch, indices[start],
                    results[0]);
      } else {
        std::vector<std::thread> threads;
        threads.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
          const std::size_t idx = indices[start + k];
          threads.emplace_back(RunSentence, std::cref(model_),
                               std::cref(data[idx]), epoch, idx,
                               std::ref(results[k]));
        }
        for (auto &t : threads) t.join();
      }
      for (SentenceResult &r : results) {
        if (r.error) std::rethrow_exception(r.error);
        total += r.loss;
        r.tape->AccumulateInto(grads);
      }
    }
    return total;
  }

 private:
  const Model &model_;
  std::size_t workers_;
};

}  // namespace

TrainHistory Train(Model &model, std::span<const Sentence> train,
                   std::span<const Sentence> dev, const TrainOptions &options) {
  const ModelConfig &config = model.config;
  config.Validate();
  TrainHistory history;

  std::vector<const Sentence *> kept;
  for (const Sentence &s : train) {
    if (!s.labeled()) {
      throw DataError(s.id, 0, "training sentence " + s.id + " has no labels");
    }
    if (static_cast<int>(s.size()) > options.max_sentence_length) {
      ++history.skipped_sentences;
      if (options.log) {
        *options.log << "warning: skipping sentence " << s.id << " with "
                     << s.size() << " tokens (cap "
                     << options.max_sentence_length << ")\n";
      }
      continue;
    }
    if (s.size() == 0) continue;
    kept.push_back(&s);
  }
  if (kept.empty()) throw DataError("train", 0, "training corpus is empty");

  std::vector<EncodedSentence> data;
  data.reserve(kept.size());
  for (const Sentence *s : kept) data.push_back(EncodeSentence(model, *s));

  Gradients grads(model.params);
  AdamState adam(model.params);
  AdamOptions adam_options;
  adam_options.learning_rate = config.learning_rate;
  BatchRunner runner(model, options.workers);
  Rng shuffle_rng(config.seed);

  // Without a validation set, stopping falls back to the training set.
  std::vector<Sentence> fallback;
  std::span<const Sentence> validation = dev;
  if (dev.empty()) {
    if (options.log) {
      *options.log << "warning: no validation sentences; early stopping uses "
                      "the training set\n";
    }
    for (const Sentence *s : kept) fallback.push_back(*s);
    validation = fallback;
  }

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Tensor> best = model.params.Snapshot();
  history.best_dev_f1 = -1.0;
  int stale = 0;
  history.stop_reason = "max_epochs";

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      grads.Zero();
      std::span<const std::size_t> batch(order.data() + start, end - start);
      double loss = runner.Run(data, batch, epoch, grads);

      Tape l2_tape;
      Value penalty = L2Penalty(l2_tape, model);
      loss += penalty.scalar();
      if (penalty.tape()->requires_grad(penalty.id())) {
        l2_tape.Backward(penalty);
        l2_tape.AccumulateInto(grads);
      }

      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss in epoch " + std::to_string(epoch));
      }
      if (!grads.AllFinite()) {
        throw NumericError("non-finite gradient in epoch " +
                           std::to_string(epoch));
      }
      ClipGlobalNorm(grads, config.clip_norm);
      AdamStep(model.params, grads, adam, adam_options);
      epoch_loss += loss;
    }
    history.train_loss.push_back(epoch_loss / static_cast<double>(data.size()));

    const double f1 = Evaluate(model, validation).f1;
    history.dev_f1.push_back(f1);
    if (options.log) {
      *options.log << "epoch " << epoch << " loss " << history.train_loss.back()
                   << " dev_f1 " << f1 << "\n";
    }
    if (f1 > history.best_dev_f1) {
      history.best_dev_f1 = f1;
      history.best_epoch = epoch;
      best = model.params.Snapshot();
      stale = 0;
    } else if (++stale >= config.patience) {
      history.stop_reason = "patience";
      break;
    }
  }
  model.params.Restore(best);
  return history;
}

}  // namespace ate
