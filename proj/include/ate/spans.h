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

#ifndef ATE_SPANS_H_
#define ATE_SPANS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ate/corpus.h"

namespace ate {

// Aspect term covering tokens [begin, end), 1-based.
struct AspectSpan {
  std::string text;
  int begin = 0;
  int end = 0;

  bool operator==(const AspectSpan &) const = default;
};

// Decodes a BIO sequence into aspect terms. A B-AP opens a term (closing any
// open one), O closes it, I-AP extends an open term and is ignored when no
// term is open. A term still open after the last token is emitted.
std::vector<AspectSpan> DecodeSpans(std::span<const Label> labels,
                                    std::span<const std::string> tokens);

// Inverse of DecodeSpans for disjoint spans: B-AP at begin, I-AP inside,
// O elsewhere.
std::vector<Label> EncodeSpans(std::span<const AspectSpan> spans, int length);

struct SpanCounts {
  long gold = 0;
  long predicted = 0;
  long matched = 0;

  SpanCounts &operator+=(const SpanCounts &other) {
    gold += other.gold;
    predicted += other.predicted;
    matched += other.matched;
    return *this;
  }
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  SpanCounts counts;
};

// Exact (begin, end) matching within one sentence.
SpanCounts CountMatches(std::span<const AspectSpan> gold,
                        std::span<const AspectSpan> predicted);

// P = matched / predicted (1 with no predictions), R = matched / gold (1 with
// no gold), F1 = 2PR / (P + R) or 0.
EvalReport ReportFromCounts(const SpanCounts &counts);

EvalReport SpanF1(std::span<const AspectSpan> gold,
                  std::span<const AspectSpan> predicted);

// "SENT_ID\tBEGIN\tEND\tTEXT" per span.
void WriteSpans(std::ostream &out, const std::string &sentence_id,
                std::span<const AspectSpan> spans);

}  // namespace ate

#endif  // ATE_SPANS_H_
