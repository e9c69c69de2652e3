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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ate/errors.h"
#include "ate/gradcheck.h"
#include "ate/model.h"
#include "ate/model_io.h"
#include "ate/synthetic.h"
#include "ate/trainer.h"
#include "doctest.h"
#include "param_count.h"
#include "test_util.h"

namespace ate {
namespace {

using testing::MakeModel;
using testing::SmallConfig;

Tensor &Mutable(const Parameter *p) { return const_cast<Parameter *>(p)->value; }

std::int64_t ExpectedCount(const Model &m) {
  return testing::ClosedFormCount(m.config, m.vocab.words().size(),
                                  m.vocab.up_relations().size(),
                                  m.vocab.down_relations().size());
}

double TotalLoss(const Model &model, std::span<const Sentence> corpus) {
  auto enc = EncodeCorpus(model, corpus);
  Tape tape;
  return ForwardLoss(tape, model, enc).value()[0];
}

ModelConfig TrainConfig() {
  ModelConfig c = SmallConfig(4);
  c.batch_size = 4;
  c.max_epochs = 4;
  c.patience = 2;
  c.seed = 3;
  return c;
}

std::string TempPath(const std::string &name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST_SUITE("pipeline") {

TEST_CASE("building is deterministic in the seed") {
  auto corpus = RandomCorpus(8, 2, 6, 1);
  Model a = MakeModel(SmallConfig(5), corpus);
  Model b = MakeModel(SmallConfig(5), corpus);
  CHECK(a.params.Snapshot() == b.params.Snapshot());
  ModelConfig other = SmallConfig(5);
  other.seed = 2;
  Model c = MakeModel(other, corpus);
  CHECK(a.params.Snapshot() != c.params.Snapshot());
}

TEST_CASE("parameter counts follow the closed form") {
  auto corpus = RandomCorpus(10, 2, 8, 4);
  for (Ablation ablation : {Ablation::kFull, Ablation::kDTreeUp, Ablation::kDTreeDown,
                            Ablation::kBiDTreeCrf, Ablation::kBiLstmCrf}) {
    for (int variant : {1, 2, 3}) {
      for (bool relation_terms : {true, false}) {
        ModelConfig c = SmallConfig(3, variant, ablation);
        c.use_relation_terms = relation_terms;
        Model m = MakeModel(c, corpus);
        CAPTURE(AblationName(ablation));
        CAPTURE(variant);
        CAPTURE(relation_terms);
        CHECK(static_cast<std::int64_t>(m.params.ScalarCount()) == ExpectedCount(m));
      }
    }
  }
}

TEST_CASE("variant three adds relation-specific matrices") {
  auto corpus = RandomCorpus(10, 2, 8, 4);
  const std::int64_t d = 7;
  Model v1 = MakeModel(SmallConfig(d, 1), corpus);
  Model v3 = MakeModel(SmallConfig(d, 3), corpus);
  const std::int64_t ru = v1.vocab.up_relations().size();
  const std::int64_t rd = v1.vocab.down_relations().size();
  const std::int64_t diff = 8 * d * d * (ru - 1) + 8 * d * d * (rd - 1);
  CHECK(static_cast<std::int64_t>(v3.params.ScalarCount() - v1.params.ScalarCount()) ==
        diff);
  CHECK(v3.params.ScalarCount() > v1.params.ScalarCount());
}

TEST_CASE("tree output width per ablation") {
  auto corpus = RandomCorpus(4, 2, 5, 2);
  CHECK(MakeModel(SmallConfig(5), corpus).tree_output_dim() == 10);
  CHECK(MakeModel(SmallConfig(5, 3, Ablation::kDTreeUp), corpus).tree_output_dim() == 5);
  CHECK(MakeModel(SmallConfig(5, 3, Ablation::kDTreeDown), corpus).tree_output_dim() == 5);
  CHECK(MakeModel(SmallConfig(5, 3, Ablation::kBiLstmCrf), corpus).tree_output_dim() == 0);
}

TEST_CASE("embedding table must match the configuration") {
  auto corpus = RandomCorpus(4, 2, 5, 2);
  Vocabulary vocab = Vocabulary::Build(corpus);
  Rng rng(1);
  EmbeddingTable table = RandomEmbeddings(vocab, 4, rng);
  CHECK_THROWS_AS(BuildModel(SmallConfig(5), vocab, table), std::invalid_argument);
  Vocabulary bigger = vocab;
  bigger.AddWord("zzz-new");
  CHECK_THROWS_AS(BuildModel(SmallConfig(4), bigger, table), std::invalid_argument);
}

TEST_CASE("loss with a zero CRF is N log 3 per sentence") {
  auto corpus = RandomCorpus(6, 1, 7, 5);
  ModelConfig c = SmallConfig(4);
  c.l2 = 0.0;
  Model m = MakeModel(c, corpus);
  Mutable(m.crf.weight).Fill(0.0);
  Mutable(m.crf.bias).Fill(0.0);
  double tokens = 0.0;
  for (const Sentence &s : corpus) tokens += s.size();
  CHECK(TotalLoss(m, corpus) == doctest::Approx(tokens * std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("loss with zero parameters has no penalty") {
  auto corpus = RandomCorpus(5, 2, 6, 6);
  Model m = MakeModel(SmallConfig(4), corpus);
  for (const auto &p : m.params) p->value.Fill(0.0);
  double tokens = 0.0;
  for (const Sentence &s : corpus) tokens += s.size();
  CHECK(TotalLoss(m, corpus) == doctest::Approx(tokens * std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("penalty matches a direct sum and bounds the loss") {
  auto corpus = RandomCorpus(5, 2, 6, 7);
  ModelConfig c = SmallConfig(4);
  c.l2 = 0.3;
  Model m = MakeModel(c, corpus);
  double squares = 0.0;
  for (const auto &p : m.params) {
    if (p->name.find(".b") != std::string::npos &&
        p->name.find(".b") + 2 == p->name.size()) {
      CHECK_FALSE(p->regularized);
    }
    if (!p->regularized) continue;
    for (double v : p->value.data()) squares += v * v;
  }
  Tape tape;
  const double penalty = L2Penalty(tape, m).value()[0];
  CHECK(penalty == doctest::Approx(0.15 * squares).epsilon(1e-13));
  CHECK(TotalLoss(m, corpus) >= penalty);
  CHECK_FALSE(m.params.Find("tree.up.b.f")->regularized);
  CHECK_FALSE(m.params.Find("crf.b")->regularized);
  CHECK(m.params.Find("embeddings")->regularized);
  CHECK(m.params.Find("tree.up.rel_emb")->regularized);
}

TEST_CASE("model gradients match finite differences") {
  auto corpus = RandomCorpus(2, 3, 5, 8);
  for (Ablation ablation : {Ablation::kFull, Ablation::kDTreeUp, Ablation::kDTreeDown,
                            Ablation::kBiDTreeCrf, Ablation::kBiLstmCrf}) {
    for (int variant : {1, 2, 3}) {
      if (ablation != Ablation::kFull && variant != 3) continue;
      ModelConfig c = SmallConfig(3, variant, ablation);
      c.l2 = 0.01;
      Model m = MakeModel(c, corpus);
      auto enc = EncodeCorpus(m, corpus);
      auto loss = [&](Tape &tape) {
        Rng rng = DropoutRng(5, 1, 0);
        return ForwardLoss(tape, m, enc, &rng);
      };
      GradCheckReport report = GradCheck(loss, m.params);
      CAPTURE(AblationName(ablation));
      CAPTURE(variant);
      CHECK(report.max_rel_error < 1e-4);
    }
  }
}

TEST_CASE("dropout masks depend only on seed, epoch and sentence") {
  auto corpus = RandomCorpus(1, 6, 6, 9);
  Model m = MakeModel(SmallConfig(4), corpus);
  EncodedSentence enc = EncodeSentence(m, corpus[0]);
  auto features = [&](Rng *rng) {
    Tape tape;
    std::vector<std::vector<double>> out;
    for (Value v : ComputeFeatures(tape, m, enc, rng)) out.push_back(v.value().values());
    return out;
  };
  Rng a = DropoutRng(1, 2, 3);
  Rng b = DropoutRng(1, 2, 3);
  Rng c = DropoutRng(1, 2, 4);
  const auto fa = features(&a);
  CHECK(fa == features(&b));
  CHECK(fa != features(&c));
  CHECK(fa != features(nullptr));
  CHECK(features(nullptr) == features(nullptr));
}

TEST_CASE("zero learning rate leaves the model unchanged") {
  auto corpus = RandomCorpus(9, 2, 6, 10);
  ModelConfig c = TrainConfig();
  c.learning_rate = 0.0;
  c.dropout = 0.0;
  c.patience = 10;
  Model m = MakeModel(c, corpus);
  const auto before = m.params.Snapshot();
  TrainHistory h = Train(m, corpus, corpus, {});
  CHECK(m.params.Snapshot() == before);
  REQUIRE(h.train_loss.size() == 4);
  for (double loss : h.train_loss) {
    CHECK(loss == doctest::Approx(h.train_loss[0]).epsilon(1e-12));
  }
  CHECK(h.stop_reason == "max_epochs");
  double expect = TotalLoss(m, corpus);
  // Each of the three batches carries the penalty once.
  Tape tape;
  expect += 2.0 * L2Penalty(tape, m).value()[0];
  CHECK(h.train_loss[0] == doctest::Approx(expect / corpus.size()).epsilon(1e-12));
}

TEST_CASE("training is reproducible and independent of worker count") {
  auto train = RandomCorpus(14, 2, 7, 11);
  auto dev = RandomCorpus(5, 2, 7, 12);
  auto run = [&](int workers) {
    Model m = MakeModel(TrainConfig(), train);
    TrainOptions options;
    options.workers = workers;
    TrainHistory h = Train(m, train, dev, options);
    return std::make_pair(h, SerializeModel(m));
  };
  auto [h1, bytes1] = run(1);
  auto [h2, bytes2] = run(1);
  auto [h4, bytes4] = run(4);
  CHECK(h1 == h2);
  CHECK(bytes1 == bytes2);
  CHECK(h1 == h4);
  CHECK(bytes1 == bytes4);
}

TEST_CASE("training keeps the best validation epoch") {
  auto train = RandomCorpus(16, 2, 7, 13);
  auto dev = RandomCorpus(6, 2, 7, 14);
  for (int patience : {1, 3, 20}) {
    ModelConfig c = TrainConfig();
    c.patience = patience;
    c.max_epochs = 8;
    c.learning_rate = 0.02;
    Model m = MakeModel(c, train);
    std::ostringstream log;
    TrainOptions options;
    options.log = &log;
    TrainHistory h = Train(m, train, dev, options);
    CAPTURE(patience);
    REQUIRE(!h.dev_f1.empty());
    CHECK(h.dev_f1.size() == h.train_loss.size());
    double best = h.dev_f1[0];
    for (double f : h.dev_f1) best = std::max(best, f);
    CHECK(h.best_dev_f1 == best);
    CHECK(h.dev_f1[h.best_epoch - 1] == best);
    for (int e = 0; e < h.best_epoch - 1; ++e) CHECK(h.dev_f1[e] < best);
    CHECK(Evaluate(m, dev).f1 == best);
    if (h.stop_reason == "patience") {
      CHECK(static_cast<int>(h.dev_f1.size()) == h.best_epoch + patience);
    } else {
      CHECK(h.stop_reason == "max_epochs");
      CHECK(h.dev_f1.size() == 8);
    }
    CHECK(log.str().find("epoch 1 loss") != std::string::npos);
  }
}

TEST_CASE("training input errors") {
  auto corpus = RandomCorpus(4, 2, 6, 15);
  ModelConfig c = TrainConfig();
  c.max_epochs = 1;
  SUBCASE("empty training set") {
    Model m = MakeModel(c, corpus);
    CHECK_THROWS_AS(Train(m, {}, corpus, {}), DataError);
  }
  SUBCASE("unlabeled training sentence") {
    Model m = MakeModel(c, corpus);
    auto unlabeled = corpus;
    for (Token &t : unlabeled[2].tokens) t.label.reset();
    CHECK_THROWS_AS(Train(m, unlabeled, corpus, {}), DataError);
  }
  SUBCASE("long sentences are skipped") {
    auto mixed = RandomCorpus(10, 2, 8, 16);
    long too_long = 0;
    for (const Sentence &s : mixed) too_long += s.size() > 4 ? 1 : 0;
    REQUIRE(too_long > 0);
    REQUIRE(too_long < 10);
    Model m = MakeModel(c, mixed);
    std::ostringstream log;
    TrainOptions options;
    options.max_sentence_length = 4;
    options.log = &log;
    TrainHistory h = Train(m, mixed, mixed, options);
    CHECK(h.skipped_sentences == too_long);
    CHECK(log.str().find("warning: skipping sentence") != std::string::npos);
  }
  SUBCASE("empty validation set falls back to training data") {
    Model m = MakeModel(c, corpus);
    std::ostringstream log;
    TrainOptions options;
    options.log = &log;
    TrainHistory h = Train(m, corpus, {}, options);
    CHECK(h.dev_f1.size() == 1);
    CHECK(log.str().find("warning: no validation sentences") != std::string::npos);
  }
  SUBCASE("non-finite loss") {
    Model m = MakeModel(c, corpus);
    Mutable(m.embeddings).Fill(std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(Train(m, corpus, corpus, {}), NumericError);
  }
}

TEST_CASE("untrained zero-CRF model tags every token as a unit term") {
  auto corpus = RandomCorpus(5, 1, 6, 17);
  Model m = MakeModel(SmallConfig(4), corpus);
  Mutable(m.crf.weight).Fill(0.0);
  Mutable(m.crf.bias).Fill(0.0);
  auto predicted = Predict(m, corpus);
  REQUIRE(predicted.size() == corpus.size());
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    REQUIRE(static_cast<int>(predicted[k].size()) == corpus[k].size());
    for (int j = 0; j < corpus[k].size(); ++j) {
      CHECK(predicted[k][j].begin == j + 1);
      CHECK(predicted[k][j].end == j + 2);
      CHECK(predicted[k][j].text == corpus[k].tokens[j].surface);
    }
  }
  CHECK(Predict(m, std::vector<Sentence>{}).empty());
}

TEST_CASE("evaluation pools counts over sentences") {
  auto corpus = RandomCorpus(12, 1, 7, 18);
  Model m = MakeModel(SmallConfig(4), corpus);
  auto predicted = Predict(m, corpus);
  SpanCounts pooled;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    auto gold = DecodeSpans(corpus[k].labels(), corpus[k].surfaces());
    SpanCounts c = SpanF1(gold, predicted[k]).counts;
    pooled += c;
  }
  EvalReport r = Evaluate(m, corpus);
  CHECK(r.counts.gold == pooled.gold);
  CHECK(r.counts.predicted == pooled.predicted);
  CHECK(r.counts.matched == pooled.matched);
  CHECK(r.f1 == ReportFromCounts(pooled).f1);

  SUBCASE("no predictions") {
    Mutable(m.crf.weight).Fill(0.0);
    Tensor &b = Mutable(m.crf.bias);
    b.Fill(0.0);
    for (int prev = 0; prev <= kNumLabels; ++prev) b[PairIndex(prev, 2)] = 100.0;
    EvalReport none = Evaluate(m, corpus);
    REQUIRE(none.counts.gold > 0);
    CHECK(none.counts.predicted == 0);
    CHECK(none.recall == 0.0);
    CHECK(none.f1 == 0.0);
  }
  SUBCASE("unlabeled data") {
    auto unlabeled = corpus;
    for (Token &t : unlabeled[0].tokens) t.label.reset();
    CHECK_THROWS_AS(Evaluate(m, unlabeled), DataError);
  }
}

TEST_CASE("unknown words and relations are counted") {
  auto train = RandomCorpus(6, 3, 6, 19);
  Model m = MakeModel(SmallConfig(4), train);
  Sentence s = MakeSentence("x", {"never-seen", "w1"}, {0, 1}, {"root", "weird"});
  UnknownCounts unknown;
  EncodedSentence enc = EncodeSentence(m, s, &unknown);
  CHECK(unknown.words == 1);
  CHECK(unknown.relations == 1);
  CHECK(enc.words[0] == 0);
  CHECK(enc.up_relations[1] == 0);
  CHECK(enc.down_relations[1] == 0);
  CHECK(enc.down_relations[0] == m.vocab.DownRootId());
  CHECK(PredictLabels(m, enc).size() == 2);
}

TEST_CASE("model files round trip") {
  auto corpus = RandomCorpus(10, 2, 8, 20);
  ModelConfig c = SmallConfig(4, 2);
  c.use_relation_terms = false;
  Model m = MakeModel(c, corpus);
  const std::string bytes = SerializeModel(m);
  Model back = DeserializeModel(bytes);
  CHECK(back.config == m.config);
  CHECK(back.vocab.words().entries() == m.vocab.words().entries());
  CHECK(back.vocab.up_relations().entries() == m.vocab.up_relations().entries());
  CHECK(back.vocab.down_relations().entries() == m.vocab.down_relations().entries());
  CHECK(back.params.Snapshot() == m.params.Snapshot());
  CHECK(SerializeModel(back) == bytes);
  auto probe = RandomCorpus(20, 1, 9, 21);
  auto a = Predict(m, probe);
  auto b = Predict(back, probe);
  CHECK(a == b);

  const std::string path = TempPath("ate_pipeline_roundtrip.model");
  SaveModel(m, path);
  ModelConfig requested = c;
  requested.dim = 9;
  std::ostringstream warn;
  Model loaded = LoadModel(path, &requested, &warn);
  CHECK(loaded.config == m.config);
  CHECK(warn.str().find("dim=4 (requested 9)") != std::string::npos);
  std::ostringstream quiet;
  LoadModel(path, &c, &quiet);
  CHECK(quiet.str().empty());
  std::remove(path.c_str());
  CHECK_THROWS_AS(LoadModel(path), FormatError);
}

TEST_CASE("damaged model files are rejected") {
  auto corpus = RandomCorpus(5, 2, 6, 22);
  Model m = MakeModel(SmallConfig(3), corpus);
  const std::string bytes = SerializeModel(m);
  auto rejects = [](const std::string &data, const std::string &fragment) {
    try {
      DeserializeModel(data);
    } catch (const FormatError &e) {
      return std::string(e.what()).find(fragment) != std::string::npos;
    }
    return false;
  };
  SUBCASE("flipped bytes") {
    for (std::size_t pos : {std::size_t{30}, bytes.size() / 2, bytes.size() - 9,
                            bytes.size() - 1}) {
      std::string bad = bytes;
      bad[pos] = static_cast<char>(bad[pos] ^ 0x10);
      CHECK(rejects(bad, "checksum"));
    }
  }
  SUBCASE("truncation") {
    CHECK(rejects(bytes.substr(0, bytes.size() - 1), "truncated"));
    CHECK(rejects(bytes.substr(0, 10), ""));
    CHECK(rejects("", ""));
  }
  SUBCASE("trailing data") { CHECK(rejects(bytes + "x", "trailing")); }
  SUBCASE("magic") {
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK(rejects(bad, "magic"));
  }
  SUBCASE("version") {
    std::string bad = bytes;
    bad[8] = static_cast<char>(kModelFormatVersion + 1);
    CHECK(rejects(bad, "version"));
  }
}

TEST_CASE("configuration key values round trip") {
  ModelConfig c;
  c.dim = 17;
  c.variant = 2;
  c.ablation = Ablation::kDTreeDown;
  c.use_relation_terms = false;
  c.dropout = 0.1 + 0.2;
  c.l2 = 1e-7;
  c.learning_rate = 0.0031;
  c.batch_size = 3;
  c.clip_norm = 2.5;
  c.patience = 9;
  c.max_epochs = 11;
  c.seed = 123456789012345ULL;
  CHECK(ModelConfig::FromKeyValues(c.ToKeyValues()) == c);
  CHECK(ModelConfig::FromKeyValues({}) == ModelConfig{});
  CHECK_THROWS_AS(ModelConfig::FromKeyValues({{"colour", "red"}}), std::invalid_argument);
  CHECK_THROWS_AS(ModelConfig::FromKeyValues({{"dim", "3x"}}), std::invalid_argument);
  CHECK_THROWS_AS(ModelConfig::FromKeyValues({{"variant", "4"}}), std::invalid_argument);
  CHECK_THROWS_AS(ModelConfig::FromKeyValues({{"dropout", "1"}}), std::invalid_argument);
  CHECK_THROWS_AS(ModelConfig::FromKeyValues({{"ablation", "tree"}}),
                  std::invalid_argument);
  for (Ablation a : {Ablation::kFull, Ablation::kDTreeUp, Ablation::kDTreeDown,
                     Ablation::kBiDTreeCrf, Ablation::kBiLstmCrf}) {
    CHECK(ParseAblation(AblationName(a)) == a);
  }
}

TEST_CASE("default configuration") {
  ModelConfig c;
  CHECK(c.dim == 300);
  CHECK(c.variant == 3);
  CHECK(c.learning_rate == 0.001);
  CHECK(c.batch_size == 20);
  CHECK(c.dropout == 0.5);
  CHECK(c.l2 == 0.001);
  CHECK(c.patience == 5);
  CHECK(c.clip_norm == 5.0);
  CHECK(c.use_relation_terms);
  CHECK(c.ablation == Ablation::kFull);
}

}  // TEST_SUITE

}  // namespace
}  // namespace ate
