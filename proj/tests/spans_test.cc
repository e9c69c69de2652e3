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


#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ate/crf_oracle.h"
#include "ate/spans.h"
#include "doctest.h"
#include "reference_spans.h"

namespace ate {
namespace {

using testing::NumberedTokens;
using testing::ReferenceSpans;

constexpr Label B = Label::kBeginAspect;
constexpr Label I = Label::kInsideAspect;
constexpr Label O = Label::kOutside;

std::vector<AspectSpan> Decode(const std::vector<Label> &labels) {
  return DecodeSpans(labels, NumberedTokens(labels.size()));
}

AspectSpan Span(int begin, int end) { return {"", begin, end}; }

TEST_SUITE("spans") {

TEST_CASE("decoding examples") {
  SUBCASE("two adjacent terms") {
    std::vector<AspectSpan> expect = {{"w1", 1, 2}, {"w2 w3", 2, 4}};
    CHECK(Decode({B, B, I, O}) == expect);
  }
  SUBCASE("all outside") { CHECK(Decode({O, O, O}).empty()); }
  SUBCASE("term at the end is flushed") {
    std::vector<AspectSpan> expect = {{"w4", 4, 5}};
    CHECK(Decode({O, O, O, B}) == expect);
  }
  SUBCASE("orphan inside label is skipped") {
    CHECK(Decode({I, O}).empty());
    std::vector<AspectSpan> expect = {{"w3", 3, 4}};
    CHECK(Decode({I, O, B, O, I}) == expect);
  }
  SUBCASE("empty sentence") { CHECK(Decode({}).empty()); }
  SUBCASE("text uses the given tokens") {
    std::vector<std::string> tokens = {"the", "hard", "disc", "is", "great"};
    std::vector<AspectSpan> expect = {{"hard disc", 2, 4}};
    CHECK(DecodeSpans(std::vector<Label>{O, B, I, O, O}, tokens) == expect);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS(DecodeSpans(std::vector<Label>{B}, NumberedTokens(2)));
  }
}

TEST_CASE("decoding agrees with the reference on every short sequence") {
  long checked = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto tokens = NumberedTokens(n);
    ForEachLabelSequence(n, [&](const std::vector<Label> &labels) {
      CHECK(DecodeSpans(labels, tokens) == ReferenceSpans(labels, tokens));
      ++checked;
    });
  }
  CHECK(checked == 1092);
}

TEST_CASE("decoded spans are disjoint and increasing") {
  for (std::size_t n = 1; n <= 6; ++n) {
    ForEachLabelSequence(n, [&](const std::vector<Label> &labels) {
      const auto spans = Decode(labels);
      for (std::size_t k = 0; k < spans.size(); ++k) {
        CHECK(spans[k].begin < spans[k].end);
        CHECK(spans[k].end <= static_cast<int>(n) + 1);
        if (k > 0) CHECK(spans[k - 1].end <= spans[k].begin);
      }
    });
  }
}

TEST_CASE("encoding then decoding returns the spans") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto tokens = NumberedTokens(n);
    std::vector<AspectSpan> spans;
    int pos = 1;
    while (pos <= n) {
      if (rng() % 3 == 0) {
        const int len = 1 + static_cast<int>(rng() % 3);
        const int end = std::min(n + 1, pos + len);
        AspectSpan s{"", pos, end};
        for (int k = pos; k < end; ++k) {
          if (k > pos) s.text += " ";
          s.text += tokens[k - 1];
        }
        spans.push_back(s);
        pos = end;
      } else {
        ++pos;
      }
    }
    const auto labels = EncodeSpans(spans, n);
    CHECK(labels.size() == static_cast<std::size_t>(n));
    CHECK(DecodeSpans(labels, tokens) == spans);
  }
  CHECK_THROWS(EncodeSpans(std::vector<AspectSpan>{Span(0, 1)}, 3));
  CHECK_THROWS(EncodeSpans(std::vector<AspectSpan>{Span(2, 5)}, 3));
  CHECK_THROWS(EncodeSpans(std::vector<AspectSpan>{Span(2, 2)}, 3));
}

TEST_CASE("span F1 examples") {
  const std::vector<AspectSpan> gold = {Span(1, 2), Span(2, 4)};
  SUBCASE("partial recall") {
    EvalReport r = SpanF1(gold, std::vector<AspectSpan>{Span(1, 2)});
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 0.5);
    CHECK(r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("perfect") {
    EvalReport r = SpanF1(gold, gold);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
  }
  SUBCASE("exact match only") {
    EvalReport r = SpanF1(std::vector<AspectSpan>{Span(1, 3)},
                          std::vector<AspectSpan>{Span(1, 2)});
    CHECK(r.f1 == 0.0);
  }
  SUBCASE("matching ignores text") {
    EvalReport r = SpanF1(std::vector<AspectSpan>{{"a", 1, 2}},
                          std::vector<AspectSpan>{{"b", 1, 2}});
    CHECK(r.f1 == 1.0);
  }
  SUBCASE("empty conventions") {
    EvalReport none = SpanF1({}, {});
    CHECK(none.precision == 1.0);
    CHECK(none.recall == 1.0);
    CHECK(none.f1 == 1.0);
    EvalReport missed = SpanF1(gold, {});
    CHECK(missed.precision == 1.0);
    CHECK(missed.recall == 0.0);
    CHECK(missed.f1 == 0.0);
    EvalReport spurious = SpanF1({}, gold);
    CHECK(spurious.precision == 0.0);
    CHECK(spurious.recall == 1.0);
    CHECK(spurious.f1 == 0.0);
  }
  SUBCASE("counts") {
    EvalReport r = SpanF1(gold, std::vector<AspectSpan>{Span(1, 2), Span(3, 4)});
    CHECK(r.counts.gold == 2);
    CHECK(r.counts.predicted == 2);
    CHECK(r.counts.matched == 1);
  }
}

TEST_CASE("F1 follows the harmonic mean formula") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    SpanCounts c;
    c.gold = static_cast<long>(rng() % 6);
    c.predicted = static_cast<long>(rng() % 6);
    c.matched = static_cast<long>(rng() % (std::min(c.gold, c.predicted) + 1));
    EvalReport r = ReportFromCounts(c);
    CHECK(r.precision >= 0.0);
    CHECK(r.precision <= 1.0);
    CHECK(r.recall >= 0.0);
    CHECK(r.recall <= 1.0);
    const double sum = r.precision + r.recall;
    const double expect = sum > 0.0 ? 2.0 * r.precision * r.recall / sum : 0.0;
    CHECK(r.f1 == expect);
  }
}

TEST_CASE("span output format") {
  std::ostringstream out;
  std::vector<AspectSpan> spans = {{"w1", 1, 2}, {"hard disc", 2, 4}};
  WriteSpans(out, "s7", spans);
  CHECK(out.str() == "s7\t1\t2\tw1\ns7\t2\t4\thard disc\n");
  std::ostringstream empty;
  WriteSpans(empty, "s8", {});
  CHECK(empty.str().empty());
}

}  // TEST_SUITE

}  // namespace
}  // namespace ate
