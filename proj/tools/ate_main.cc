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


// Command-line front end: train, predict, eval, gradcheck, inspect, synth.
//
// Exit codes: 0 success, 1 bad flags, 2 bad input data, 3 numeric failure,
// 4 gradient check above threshold.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ate/config.h"
#include "ate/corpus.h"
#include "ate/errors.h"
#include "ate/gradcheck.h"
#include "ate/model.h"
#include "ate/model_io.h"
#include "ate/synthetic.h"
#include "ate/trainer.h"
#include "ate/vocabulary.h"
#include "json.hpp"

namespace ate {
namespace {

constexpr int kExitFlags = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitGradCheck = 4;

struct ModelFlags {
  ModelConfig config;
  std::string ablation = "full";
  bool no_relation_terms = false;

  void Register(CLI::App *app) {
    app->add_option("--dim", config.dim, "Word vector dimension d")
        ->capture_default_str();
    app->add_option("--variant", config.variant,
                    "Relation matrix sharing: 1 shared, 2 shared except "
                    "forget gates, 3 per relation")
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    app->add_option("--ablation", ablation, "Network wiring")
        ->check(CLI::IsMember(
            {"full", "dtree-up", "dtree-down", "bidtree-crf", "bilstm-crf"}))
        ->capture_default_str();
    app->add_flag("--no-relation-terms", no_relation_terms,
                  "Drop relation embeddings from the tree gates");
    app->add_option("--dropout", config.dropout, "Dropout rate")
        ->capture_default_str();
    app->add_option("--l2", config.l2, "L2 regularization weight")
        ->capture_default_str();
    app->add_option("--lr", config.learning_rate, "Adam learning rate")
        ->capture_default_str();
    app->add_option("--batch", config.batch_size, "Mini-batch size")
        ->capture_default_str();
    app->add_option("--clip", config.clip_norm, "Global gradient norm cap")
        ->capture_default_str();
    app->add_option("--patience", config.patience,
                    "Epochs without validation gain before stopping")
        ->capture_default_str();
    app->add_option("--max-epochs", config.max_epochs, "Epoch limit")
        ->capture_default_str();
    app->add_option("--seed", config.seed, "Random seed")
        ->capture_default_str();
  }

  ModelConfig Resolve() const {
    ModelConfig c = config;
    c.ablation = *ParseAblation(ablation);
    c.use_relation_terms = !no_relation_terms;
    c.Validate();
    return c;
  }
};

void PrintReport(const EvalReport &r) {
  std::cout << std::fixed << std::setprecision(1) << "P " << 100.0 * r.precision
            << "\tR " << 100.0 * r.recall << "\tF1 " << 100.0 * r.f1
            << "\t(gold " << r.counts.gold << ", predicted "
            << r.counts.predicted << ", matched " << r.counts.matched << ")\n";
  std::cout.unsetf(std::ios::floatfield);
}

void WarnUnknown(const UnknownCounts &unknown, const std::string &what) {
  if (unknown.words > 0 || unknown.relations > 0) {
    std::cerr << "warning: " << what << ": " << unknown.words
              << " unknown word tokens and " << unknown.relations
              << " unknown relations mapped to the unknown entries\n";
  }
}

double Mean(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double StdDev(const std::vector<double> &v) {
  if (v.size() < 2) return 0.0;
  const double m = Mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// ---- train ----

struct TrainFlags {
  ModelFlags model;
  std::string corpus, dev, test, embeddings, out, history;
  bool random_embeddings = false;
  int workers = 1;
  int runs = 1;
  int max_length = 200;
};

int RunTrain(const TrainFlags &f) {
  const ModelConfig base = f.model.Resolve();
  if (f.embeddings.empty() == !f.random_embeddings) {
    std::cerr << "error: give exactly one of --embeddings and "
                 "--random-embeddings\n";
    return kExitFlags;
  }
  std::vector<Sentence> train = ReadCorpusFile(f.corpus);
  std::vector<Sentence> dev;
  if (!f.dev.empty()) dev = ReadCorpusFile(f.dev);
  std::vector<Sentence> test;
  if (!f.test.empty()) test = ReadCorpusFile(f.test);
  if (train.empty()) throw DataError(f.corpus, 0, "training corpus is empty");

  std::vector<std::span<const Sentence>> extra = {dev, test};
  Vocabulary vocab = Vocabulary::Build(train, extra);

  nlohmann::json report;
  report["config"] = base.ToKeyValues();
  report["runs"] = nlohmann::json::array();
  std::vector<double> dev_scores, test_scores;

  for (int run = 0; run < f.runs; ++run) {
    ModelConfig config = base;
    config.seed = base.seed + static_cast<std::uint64_t>(run);
    std::seed_seq emb_seed{static_cast<std::uint32_t>(config.seed),
                           static_cast<std::uint32_t>(config.seed >> 32), 1u};
    Rng emb_rng(emb_seed);
    EmbeddingTable table =
        f.random_embeddings
            ? RandomEmbeddings(vocab, config.dim, emb_rng)
            : LoadEmbeddingsFile(f.embeddings, vocab, config.dim, emb_rng);
    if (run == 0) {
      std::cerr << "vocabulary: " << vocab.words().size() << " words, "
                << vocab.up_relations().size() << " relations; "
                << table.oov_count << " words without a pretrained vector\n";
    }
    Model model = BuildModel(config, vocab, table);
    if (run == 0) {
      UnknownCounts unknown;
      EncodeCorpus(model, dev, &unknown);
      WarnUnknown(unknown, "validation corpus");
    }

    TrainOptions options;
    options.workers = f.workers;
    options.max_sentence_length = f.max_length;
    options.log = &std::cerr;
    TrainHistory history = Train(model, train, dev, options);

    nlohmann::json entry;
    entry["seed"] = config.seed;
    entry["train_loss"] = history.train_loss;
    entry["dev_f1"] = history.dev_f1;
    entry["best_epoch"] = history.best_epoch;
    entry["best_dev_f1"] = history.best_dev_f1;
    entry["stop_reason"] = history.stop_reason;
    entry["skipped_sentences"] = history.skipped_sentences;
    dev_scores.push_back(history.best_dev_f1);
    std::cout << "run " << run + 1 << ": best epoch " << history.best_epoch
              << ", validation F1 " << std::fixed << std::setprecision(1)
              << 100.0 * history.best_dev_f1 << " (" << history.stop_reason
              << ")\n";
    std::cout.unsetf(std::ios::floatfield);
    if (!test.empty()) {
      EvalReport r = Evaluate(model, test);
      entry["test"] = {{"precision", r.precision},
                       {"recall", r.recall},
                       {"f1", r.f1}};
      test_scores.push_back(r.f1);
      std::cout << "  test ";
      PrintReport(r);
    }
    report["runs"].push_back(entry);
    SaveModel(model, run == 0 ? f.out : f.out + ".run" + std::to_string(run + 1));
  }

  if (f.runs > 1) {
    auto summary = [&](const char *name, const std::vector<double> &v) {
      std::vector<double> pct;
      for (double x : v) pct.push_back(100.0 * x);
      std::cout << name << " F1 " << std::fixed << std::setprecision(2)
                << Mean(pct) << " +- " << StdDev(pct) << " over " << v.size()
                << " runs\n";
      std::cout.unsetf(std::ios::floatfield);
      report["summary"][name] = {{"mean_f1", Mean(pct)},
                                 {"stddev_f1", StdDev(pct)}};
    };
    summary("validation", dev_scores);
    if (!test_scores.empty()) summary("test", test_scores);
  }

  const std::string history_path =
      f.history.empty() ? f.out + ".history.json" : f.history;
  std::ofstream hist(history_path);
  if (!hist) throw DataError(history_path, 0, "cannot write history");
  hist << report.dump(2) << "\n";
  return 0;
}

// ---- predict / eval ----

struct ApplyFlags {
  ModelFlags model;  // only to detect requested values differing from file
  std::string model_path, input, output;
};

Model LoadForApply(const ApplyFlags &f, CLI::App *app) {
  // Flags the user actually passed are compared against the stored config.
  bool any = false;
  for (const char *name : {"--dim", "--variant", "--ablation",
                           "--no-relation-terms", "--seed"}) {
    if (app->count(name) > 0) any = true;
  }
  ModelConfig requested = f.model.config;
  if (any) {
    requested.ablation = *ParseAblation(f.model.ablation);
    requested.use_relation_terms = !f.model.no_relation_terms;
  }
  Model model = LoadModel(f.model_path, nullptr, nullptr);
  if (any) {
    // Only the keys that were set on the command line matter here.
    std::map<std::string, std::string> asked = requested.ToKeyValues();
    std::map<std::string, std::string> stored = model.config.ToKeyValues();
    const std::map<std::string, std::string> flag_keys = {
        {"--dim", "dim"}, {"--variant", "variant"}, {"--ablation", "ablation"},
        {"--no-relation-terms", "relation_terms"}, {"--seed", "seed"}};
    for (const auto &[flag, key] : flag_keys) {
      if (app->count(flag) > 0 && asked[key] != stored[key]) {
        std::cerr << "warning: " << flag << " ignored; the model file has "
                  << key << "=" << stored[key] << "\n";
      }
    }
  }
  return model;
}

int RunPredict(const ApplyFlags &f, CLI::App *app) {
  Model model = LoadForApply(f, app);
  std::vector<Sentence> corpus = ReadCorpusFile(f.input);
  UnknownCounts unknown;
  EncodeCorpus(model, corpus, &unknown);
  WarnUnknown(unknown, f.input);
  auto spans = Predict(model, corpus);
  std::ofstream file;
  std::ostream *out = &std::cout;
  if (!f.output.empty()) {
    file.open(f.output);
    if (!file) throw DataError(f.output, 0, "cannot write predictions");
    out = &file;
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    WriteSpans(*out, corpus[i].id, spans[i]);
  }
  return 0;
}

int RunEval(const ApplyFlags &f, CLI::App *app) {
  Model model = LoadForApply(f, app);
  std::vector<Sentence> corpus = ReadCorpusFile(f.input);
  for (const Sentence &s : corpus) {
    if (!s.labeled()) {
      throw DataError(f.input, 0, "sentence " + s.id + " has no labels");
    }
  }
  UnknownCounts unknown;
  EncodeCorpus(model, corpus, &unknown);
  WarnUnknown(unknown, f.input);
  PrintReport(Evaluate(model, corpus));
  return 0;
}

// ---- gradcheck ----

struct GradCheckFlags {
  ModelFlags model;
  std::string corpus;
  double threshold = 1e-4;
  double epsilon = 1e-4;
  std::size_t coords = 24;
};

int RunGradCheck(const GradCheckFlags &f) {
  ModelConfig config = f.model.Resolve();
  config.dropout = 0.0;
  std::vector<Sentence> data;
  if (f.corpus.empty()) {
    data.push_back(BranchingSentence());
  } else {
    data = ReadCorpusFile(f.corpus);
    if (data.empty()) throw DataError(f.corpus, 0, "corpus is empty");
    data.resize(1);
  }
  Vocabulary vocab = Vocabulary::Build(data);
  Rng rng(config.seed);
  Model model = BuildModel(config, vocab, RandomEmbeddings(vocab, config.dim, rng));
  EncodedSentence enc = EncodeSentence(model, data[0]);
  auto loss = [&](Tape &tape) {
    return ForwardLoss(tape, model, std::span<const EncodedSentence>(&enc, 1));
  };
  GradCheckOptions options;
  options.epsilon = f.epsilon;
  options.max_coords_per_param = f.coords;
  options.seed = config.seed;
  GradCheckReport report = GradCheck(loss, model.params, options);
  bool ok = true;
  for (const GroupError &g : report.groups) {
    const bool pass = g.max_rel_error < f.threshold;
    ok = ok && pass;
    std::cout << (pass ? "ok    " : "FAIL  ") << std::left << std::setw(22)
              << g.group << std::right << " max_rel_error "
              << std::scientific << std::setprecision(3) << g.max_rel_error
              << "  (" << g.coords_checked << " coords)";
    if (!pass) {
      std::cout << "  worst " << g.worst_param << "[" << g.worst_index
                << "] analytic " << g.analytic << " numeric " << g.numeric;
    }
    std::cout << "\n";
  }
  std::cout.unsetf(std::ios::floatfield);
  std::cout << "overall max_rel_error " << report.max_rel_error << " threshold "
            << f.threshold << "\n";
  return ok ? 0 : kExitGradCheck;
}

// ---- inspect ----

struct InspectFlags {
  std::string corpus, embeddings, model_path;
  int dim = 300;
};

int RunInspect(const InspectFlags &f) {
  if (f.corpus.empty() && f.embeddings.empty() && f.model_path.empty()) {
    std::cerr << "error: inspect needs --corpus, --embeddings or --model\n";
    return kExitFlags;
  }
  std::optional<Vocabulary> vocab;
  if (!f.corpus.empty()) {
    std::vector<Sentence> corpus = ReadCorpusFile(f.corpus);
    long tokens = 0, labeled = 0, max_len = 0;
    SpanCounts spans;
    for (const Sentence &s : corpus) {
      tokens += static_cast<long>(s.size());
      max_len = std::max<long>(max_len, static_cast<long>(s.size()));
      if (s.labeled()) {
        ++labeled;
        auto labels = s.labels();
        auto surfaces = s.surfaces();
        spans.gold += static_cast<long>(DecodeSpans(labels, surfaces).size());
      }
    }
    vocab = Vocabulary::Build(corpus);
    std::cout << "corpus " << f.corpus << "\n  sentences " << corpus.size()
              << "\n  tokens " << tokens << "\n  longest " << max_len
              << "\n  labeled sentences " << labeled << "\n  aspect spans "
              << spans.gold << "\n  word types " << vocab->words().size() - 1
              << "\n  relations " << vocab->up_relations().size() - 1 << "\n";
  }
  if (!f.embeddings.empty()) {
    if (!vocab) vocab.emplace();
    Rng rng(1);
    EmbeddingTable table = LoadEmbeddingsFile(f.embeddings, *vocab, f.dim, rng);
    std::cout << "embeddings " << f.embeddings << "\n  dim " << table.dim()
              << "\n  vocabulary words without a vector " << table.oov_count
              << "\n";
  }
  if (!f.model_path.empty()) {
    Model model = LoadModel(f.model_path);
    std::cout << "model " << f.model_path << "\n";
    for (const auto &[key, value] : model.config.ToKeyValues()) {
      std::cout << "  " << key << " = " << value << "\n";
    }
    std::cout << "  words " << model.vocab.words().size() << "\n  up relations "
              << model.vocab.up_relations().size() << "\n  down relations "
              << model.vocab.down_relations().size() << "\n  parameters "
              << model.params.ScalarCount() << " in " << model.params.size()
              << " tensors\n";
  }
  return 0;
}

// ---- synth ----

struct SynthFlags {
  std::string kind = "template";
  int count = 50;
  std::uint64_t seed = 1;
  std::string out;
};

int RunSynth(const SynthFlags &f) {
  std::vector<Sentence> corpus = f.kind == "template"
                                     ? TemplateCorpus(f.count, f.seed)
                                     : RandomCorpus(f.count, 1, 12, f.seed);
  std::ofstream file;
  std::ostream *out = &std::cout;
  if (!f.out.empty()) {
    file.open(f.out);
    if (!file) throw DataError(f.out, 0, "cannot write corpus");
    out = &file;
  }
  WriteCorpus(*out, corpus);
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{"Aspect term extraction with a bidirectional dependency-tree "
               "LSTM, a BiLSTM and a CRF"};
  app.require_subcommand(1);

  TrainFlags train;
  CLI::App *train_cmd = app.add_subcommand("train", "Train a model");
  train.model.Register(train_cmd);
  train_cmd->add_option("--corpus", train.corpus, "Training corpus")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--dev", train.dev, "Validation corpus for early stopping")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--test", train.test, "Test corpus scored after each run")
      ->check(CLI::ExistingFile);
  auto *emb = train_cmd->add_option("--embeddings", train.embeddings,
                                    "Word vectors in text format")
                  ->check(CLI::ExistingFile);
  auto *rnd = train_cmd->add_flag("--random-embeddings", train.random_embeddings,
                                  "Initialize every word vector randomly");
  emb->excludes(rnd);
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--history", train.history,
                        "History report (default <out>.history.json)");
  train_cmd->add_option("--workers", train.workers, "Threads per batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--runs", train.runs,
                        "Independent runs with seeds seed, seed+1, ...")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--max-length", train.max_length,
                        "Skip longer training sentences")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ApplyFlags predict;
  CLI::App *predict_cmd =
      app.add_subcommand("predict", "Write aspect spans: ID BEGIN END TEXT");
  predict.model.Register(predict_cmd);
  predict_cmd->add_option("--model", predict.model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--input", predict.input, "Corpus to tag")
      ->required()
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--output", predict.output, "Output file (default stdout)");

  ApplyFlags eval;
  CLI::App *eval_cmd =
      app.add_subcommand("eval", "Span precision, recall and F1 in percent");
  eval.model.Register(eval_cmd);
  eval_cmd->add_option("--model", eval.model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--input", eval.input, "Labeled corpus")
      ->required()
      ->check(CLI::ExistingFile);

  GradCheckFlags grad;
  grad.model.config.dim = 8;
  CLI::App *grad_cmd = app.add_subcommand(
      "gradcheck", "Compare analytic gradients with central differences");
  grad.model.Register(grad_cmd);
  grad_cmd->add_option("--corpus", grad.corpus,
                       "Use the first sentence of this corpus")
      ->check(CLI::ExistingFile);
  grad_cmd->add_option("--threshold", grad.threshold, "Maximum relative error")
      ->capture_default_str();
  grad_cmd->add_option("--epsilon", grad.epsilon, "Finite-difference step")
      ->capture_default_str();
  grad_cmd->add_option("--coords", grad.coords,
                       "Sampled coordinates per tensor")
      ->capture_default_str();

  InspectFlags inspect;
  CLI::App *inspect_cmd =
      app.add_subcommand("inspect", "Summarize a corpus, embeddings or model");
  inspect_cmd->add_option("--corpus", inspect.corpus, "Corpus file")
      ->check(CLI::ExistingFile);
  inspect_cmd->add_option("--embeddings", inspect.embeddings, "Embedding file")
      ->check(CLI::ExistingFile);
  inspect_cmd->add_option("--dim", inspect.dim, "Expected embedding dimension")
      ->capture_default_str();
  inspect_cmd->add_option("--model", inspect.model_path, "Model file")
      ->check(CLI::ExistingFile);

  SynthFlags synth;
  CLI::App *synth_cmd =
      app.add_subcommand("synth", "Write a generated corpus");
  synth_cmd->add_option("--kind", synth.kind, "template or random")
      ->check(CLI::IsMember({"template", "random"}))
      ->capture_default_str();
  synth_cmd->add_option("--count", synth.count, "Number of sentences")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFlags;
  }

  try {
    if (*train_cmd) return RunTrain(train);
    if (*predict_cmd) return RunPredict(predict, predict_cmd);
    if (*eval_cmd) return RunEval(eval, eval_cmd);
    if (*grad_cmd) return RunGradCheck(grad);
    if (*inspect_cmd) return RunInspect(inspect);
    if (*synth_cmd) return RunSynth(synth);
  } catch (const DataError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const FormatError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlags;
  }
  return kExitFlags;
}

}  // namespace
}  // namespace ate

int main(int argc, char **argv) { return ate::Main(argc, argv); }
