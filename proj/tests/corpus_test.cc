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


#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ate/corpus.h"
#include "ate/errors.h"
#include "ate/synthetic.h"
#include "ate/vocabulary.h"
#include "doctest.h"
#include "test_util.h"

namespace ate {
namespace {

std::vector<Sentence> Parse(const std::string &text) {
  std::istringstream in(text);
  return ParseCorpus(in, "test.conll");
}

// Line number reported for a corpus that should fail to parse.
int ErrorLine(const std::string &text) {
  try {
    Parse(text);
  } catch (const DataError &e) {
    return e.line();
  }
  return -1;
}

std::string ErrorText(const std::string &text) {
  try {
    Parse(text);
  } catch (const DataError &e) {
    return e.what();
  }
  return "";
}

TEST_SUITE("corpus") {

TEST_CASE("keyboard responds") {
  const std::string text =
      "# sent_id = r1\n"
      "1\tKeyboard\t2\tnsubj\tB-AP\n"
      "2\tresponds\t0\troot\tO\n"
      "3\twell\t2\tadvmod\tO\n"
      "4\t.\t2\tpunct\tO\n";
  auto corpus = Parse(text);
  REQUIRE(corpus.size() == 1);
  const Sentence &s = corpus[0];
  CHECK(s.id == "r1");
  CHECK(s.size() == 4);
  CHECK(s.tree.root() == 2);
  const auto &kids = s.tree.children(2);
  CHECK(std::find(kids.begin(), kids.end(), 1) != kids.end());
  CHECK(s.tokens[0].relation == "nsubj");
  CHECK(s.labeled());
  CHECK(s.labels()[0] == Label::kBeginAspect);
}

TEST_CASE("empty stream gives no sentences") {
  CHECK(Parse("").empty());
  CHECK(Parse("\n\n# comment only\n\n").empty());
}

TEST_CASE("self-loop is reported at its line") {
  const std::string text =
      "1\ta\t0\troot\n"
      "2\tb\t2\tdep\n"
      "3\tc\t1\tdep\n";
  CHECK(ErrorLine(text) == 2);
  CHECK(ErrorText(text).find("self-loop") != std::string::npos);
  CHECK(ErrorText(text).find("test.conll:2") == 0);
}

TEST_CASE("parse errors name their line") {
  SUBCASE("column count") {
    CHECK(ErrorLine("1\ta\t0\n") == 1);
    CHECK(ErrorLine("1\ta\t0\troot\tO\textra\n") == 1);
  }
  SUBCASE("head out of range") {
    CHECK(ErrorLine("1\ta\t0\troot\n2\tb\t7\tdep\n") == 2);
    CHECK(ErrorLine("1\ta\t0\troot\n2\tb\t-1\tdep\n") == 2);
  }
  SUBCASE("cycle") {
    const std::string text =
        "# first sentence is fine\n"
        "1\tx\t0\troot\n"
        "\n"
        "1\ta\t2\tdep\n"
        "2\tb\t1\tdep\n"
        "3\tc\t0\troot\n";
    CHECK(ErrorLine(text) == 4);
    CHECK(ErrorText(text).find("cycle") != std::string::npos);
  }
  SUBCASE("multiple roots") {
    CHECK(ErrorLine("1\ta\t0\troot\n2\tb\t0\troot\n") == 1);
  }
  SUBCASE("invalid label") {
    CHECK(ErrorLine("1\ta\t0\troot\tB-ASP\n") == 1);
  }
  SUBCASE("reserved relation prefix") {
    CHECK(ErrorLine("1\ta\t0\troot\n2\tb\t1\tI-nmod\n") == 2);
  }
  SUBCASE("labels on some tokens only") {
    CHECK(ErrorLine("1\ta\t0\troot\tO\n2\tb\t1\tdep\n") == 2);
  }
  SUBCASE("index out of sequence") {
    CHECK(ErrorLine("1\ta\t0\troot\n3\tb\t1\tdep\n") == 2);
  }
  SUBCASE("empty fields") {
    CHECK(ErrorLine("1\t\t0\troot\n") == 1);
    CHECK(ErrorLine("1\ta\t0\t\n") == 1);
  }
}

TEST_CASE("unlabeled input and default ids") {
  auto corpus = Parse("1\ta\t0\troot\n\n1\tb\t0\troot\r\n2\tc\t1\tdep\r\n");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].id == "1");
  CHECK(corpus[1].id == "2");
  CHECK(!corpus[1].labeled());
  CHECK(corpus[1].tokens[1].relation == "dep");
}

TEST_CASE("validate chain, multi-root and cycle") {
  const std::vector<int> chain = {0, 1, 2};  // 3 -> 2 -> 1 -> ROOT
  CHECK(ValidateHeads(chain).ok());
  const std::vector<int> two_roots = {0, 0};
  TreeCheck multi = ValidateHeads(two_roots);
  CHECK(multi.kind == TreeErrorKind::kMultipleRoots);
  CHECK(multi.nodes == std::vector<int>{1, 2});
  const std::vector<int> cyclic = {2, 1, 0};
  TreeCheck cycle = ValidateHeads(cyclic);
  CHECK(cycle.kind == TreeErrorKind::kCycle);
  CHECK(cycle.nodes == std::vector<int>{1, 2});
  const std::vector<int> rootless = {2, 1};
  TreeCheck none = ValidateHeads(rootless);
  CHECK(none.kind == TreeErrorKind::kNoRoot);
  CHECK(none.nodes == std::vector<int>{1, 2});
  // 4 -> 3 -> 4 hangs off nothing while 1 <- 2 is the real tree.
  const std::vector<int> detached = {0, 1, 4, 3};
  TreeCheck unreachable = ValidateHeads(detached);
  CHECK(unreachable.kind == TreeErrorKind::kCycle);
  CHECK(unreachable.nodes == std::vector<int>{3, 4});
  CHECK_THROWS_AS(DepTree::FromHeads({0, 3, 2}), DataError);
  CHECK(ValidateTree(DepTree::FromHeads({0, 1, 2})).ok());
}

TEST_CASE("traversal orders") {
  DepTree chain = DepTree::FromHeads({0, 1, 2});
  CHECK(chain.BottomUpOrder() == std::vector<int>{3, 2, 1});
  CHECK(chain.TopDownOrder() == std::vector<int>{1, 2, 3});
  DepTree star = DepTree::FromHeads({0, 1, 1, 1});
  CHECK(star.BottomUpOrder() == std::vector<int>{2, 3, 4, 1});
  CHECK(star.TopDownOrder() == std::vector<int>{1, 2, 3, 4});
  DepTree single = DepTree::FromHeads({0});
  CHECK(single.BottomUpOrder() == std::vector<int>{1});
  CHECK(single.TopDownOrder() == std::vector<int>{1});
  CHECK(star.children(0) == std::vector<int>{1});
}

// Every node after its dependents (bottom-up) or after its head (top-down).
bool ChildrenFirst(const DepTree &tree, const std::vector<int> &order) {
  std::vector<int> pos(tree.size() + 1, -1);
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
  for (int v = 1; v <= tree.size(); ++v) {
    if (pos[v] < 0) return false;
    if (tree.head(v) != 0 && pos[v] > pos[tree.head(v)]) return false;
  }
  return static_cast<int>(order.size()) == tree.size();
}

bool HeadsFirst(const DepTree &tree, std::vector<int> order) {
  std::reverse(order.begin(), order.end());
  return ChildrenFirst(tree, order);
}

TEST_CASE("order duality on random trees") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 17);
    DepTree tree = DepTree::FromHeads(RandomHeads(n, seed));
    auto up = tree.BottomUpOrder();
    auto down = tree.TopDownOrder();
    CHECK(ChildrenFirst(tree, up));
    CHECK(HeadsFirst(tree, down));
    // Reversing one order gives a valid order of the other kind.
    std::vector<int> up_reversed(up.rbegin(), up.rend());
    std::vector<int> down_reversed(down.rbegin(), down.rend());
    CHECK(HeadsFirst(tree, up_reversed));
    CHECK(ChildrenFirst(tree, down_reversed));
    std::set<int> nodes(up.begin(), up.end());
    CHECK(static_cast<int>(nodes.size()) == n);
  }
}

TEST_CASE("inverse relations") {
  CHECK(InverseRelation("nmod") == "I-nmod");
  CHECK(InverseRelation("conj") == "I-conj");
  CHECK(InverseRelation("") == "I-");
  Vocabulary vocab;
  CHECK(vocab.down_relations().Lookup(InverseRelation("")) == 0);
}

TEST_CASE("inverse relation is injective on unprefixed strings") {
  const std::vector<std::string> rels = {"", "a", "nmod", "nmod:poss", "I",
                                         "Inmod", "i-nmod", "root", "-"};
  std::set<std::string> images;
  for (const auto &r : rels) images.insert(InverseRelation(r));
  CHECK(images.size() == rels.size());
}

TEST_CASE("write then parse is the identity") {
  auto corpus = RandomCorpus(40, 1, 9, 77);
  auto templated = TemplateCorpus(12, 5);
  corpus.insert(corpus.end(), templated.begin(), templated.end());
  corpus.push_back(MakeSentence("unlabeled", {"x", "y"}, {0, 1}, {"root", "dep"}));
  std::ostringstream out;
  WriteCorpus(out, corpus);
  auto again = Parse(out.str());
  CHECK(again == corpus);
  std::ostringstream out2;
  WriteCorpus(out2, again);
  CHECK(out2.str() == out.str());
}

TEST_CASE("vocabulary ids") {
  auto train = Parse("1\tthe\t2\tdet\tO\n2\tscreen\t0\troot\tB-AP\n");
  auto dev = Parse("1\ta\t2\tamod\tO\n2\tscreen\t0\troot\tB-AP\n");
  std::vector<std::span<const Sentence>> extra = {dev};
  Vocabulary vocab = Vocabulary::Build(train, extra);
  CHECK(vocab.WordId("<unk>") == 0);
  CHECK(vocab.WordId("never seen") == 0);
  CHECK(vocab.WordId("the") > 0);
  CHECK(vocab.WordId("a") > 0);  // words from every corpus
  CHECK(vocab.UpRelationId("det") > 0);
  CHECK(vocab.UpRelationId("amod") == 0);  // relations from training only
  CHECK(vocab.DownRelationId("det") > 0);
  CHECK(vocab.DownRelationId("det") != vocab.DownRootId());
  CHECK(vocab.DownRelationId("amod") == 0);
  CHECK(vocab.down_relations().name(vocab.DownRelationId("det")) == "I-det");
  CHECK(vocab.DownRootId() > 0);
}

EmbeddingTable Load(const std::string &text, const Vocabulary &vocab, int dim,
                    std::uint64_t seed = 1) {
  std::istringstream in(text);
  Rng rng(seed);
  return LoadEmbeddings(in, vocab, dim, rng, "vec.txt");
}

int EmbeddingErrorLine(const std::string &text, int dim) {
  Vocabulary vocab;
  vocab.AddWord("a");
  try {
    Load(text, vocab, dim);
  } catch (const DataError &e) {
    return e.line();
  }
  return -1;
}

TEST_CASE("embedding rows are copied verbatim") {
  Vocabulary vocab;
  vocab.AddWord("a");
  vocab.AddWord("b");
  EmbeddingTable t = Load("2 3\na 0.5 -1 2e-3\nb 1 2 3\n", vocab, 3);
  CHECK(t.matrix.rows() == 3);  // unknown row plus two words
  CHECK(testing::Row(t.matrix, vocab.WordId("a")) ==
        testing::Vec{0.5, -1, 2e-3});
  CHECK(testing::Row(t.matrix, vocab.WordId("b")) == testing::Vec{1, 2, 3});
  CHECK(t.oov_count == 0);
  CHECK(!t.random_init[vocab.WordId("a")]);
}

TEST_CASE("missing words are drawn from the documented range") {
  Vocabulary vocab;
  vocab.AddWord("a");
  vocab.AddWord("c");
  const int d = 16;
  std::string text = "1 16\na";
  for (int j = 0; j < d; ++j) text += " 0.1";
  EmbeddingTable t = Load(text + "\n", vocab, d);
  CHECK(t.oov_count == 1);
  CHECK(t.random_init[vocab.WordId("c")]);
  const double limit = 0.25 / 4.0;
  CHECK(OovInitLimit(d) == limit);
  bool nonzero = false;
  for (double x : t.matrix.row(vocab.WordId("c"))) {
    CHECK(std::abs(x) <= limit);
    nonzero = nonzero || x != 0.0;
  }
  CHECK(nonzero);
}

TEST_CASE("embedding file errors") {
  std::string row299 = "a";
  for (int j = 0; j < 299; ++j) row299 += " 0.5";
  CHECK(EmbeddingErrorLine("1 300\n" + row299 + "\n", 300) == 2);
  CHECK(EmbeddingErrorLine("1 3\na 1 2 3\n", 4) == 1);          // dimension
  CHECK(EmbeddingErrorLine("1 3\na 1 x 3\n", 3) == 2);          // bad float
  CHECK(EmbeddingErrorLine("1 3\na 1 2 3 4\n", 3) == 2);        // too long
  CHECK(EmbeddingErrorLine("3 3\na 1 2 3\nb 1 2 3\n", 3) == 3);  // too few rows
  CHECK(EmbeddingErrorLine("three 3\n", 3) == 1);
  CHECK(EmbeddingErrorLine("", 3) == 1);
}

TEST_CASE("first occurrence of a word wins") {
  Vocabulary vocab;
  vocab.AddWord("a");
  EmbeddingTable t = Load("2 2\na 1 1\na 2 2\n", vocab, 2);
  CHECK(testing::Row(t.matrix, 1) == testing::Vec{1, 1});
}

}  // TEST_SUITE

}  // namespace
}  // namespace ate
