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

#include "ate/spans.h"

#include <ostream>
#include <set>
#include <utility>

#include "ate/errors.h"

namespace ate {
namespace {

std::string JoinTokens(std::span<const std::string> tokens, int begin,
                       int end) {
  std::string text;
  for (int k = begin; k < end; ++k) {
    if (k > begin) text += ' ';
    text += tokens[k - 1];
  }
  return text;
}

}  // namespace

std::vector<AspectSpan> DecodeSpans(std::span<const Label> labels,
                                    std::span<const std::string> tokens) {
  if (labels.size() != tokens.size()) {
    throw ShapeError("decode: " + std::to_string(labels.size()) +
                     " labels for " + std::to_string(tokens.size()) +
                     " tokens");
  }
  const int n = static_cast<int>(labels.size());
  std::vector<AspectSpan> result;
  bool open = false;  // temp != ""
  int start = 0;
  auto emit = [&](int i) {
    result.push_back({JoinTokens(tokens, start, i), start, i});
  };
  int i = 1;
  for (; i <= n; ++i) {
    const Label t = labels[i - 1];
    if (t == Label::kOutside && open) {
      emit(i);
      open = false;
      start = 0;
    } else if (t == Label::kBeginAspect) {
      if (open) emit(i);
      open = true;
      start = i;
    }
  }
  if (open) emit(i);
  return result;
}

std::vector<Label> EncodeSpans(std::span<const AspectSpan> spans, int length) {
  std::vector<Label> labels(length, Label::kOutside);
  for (const AspectSpan &s : spans) {
    if (s.begin < 1 || s.end <= s.begin || s.end > length + 1) {
      throw ShapeError("span [" + std::to_string(s.begin) + ", " +
                       std::to_string(s.end) + ") outside sentence of length " +
                       std::to_string(length));
    }
    labels[s.begin - 1] = Label::kBeginAspect;
    for (int k = s.begin + 1; k < s.end; ++k) {
      labels[k - 1] = Label::kInsideAspect;
    }
  }
  return labels;
}

SpanCounts CountMatches(std::span<const AspectSpan> gold,
                        std::span<const AspectSpan> predicted) {
  std::set<std::pair<int, int>> gold_keys;
  for (const AspectSpan &s : gold) gold_keys.emplace(s.begin, s.end);
  std::set<std::pair<int, int>> pred_keys;
  for (const AspectSpan &s : predicted) pred_keys.emplace(s.begin, s.end);
  SpanCounts counts;
  counts.gold = static_cast<long>(gold_keys.size());
  counts.predicted = static_cast<long>(pred_keys.size());
  for (const auto &key : pred_keys) {
    if (gold_keys.count(key) > 0) ++counts.matched;
  }
  return counts;
}

EvalReport ReportFromCounts(const SpanCounts &counts) {
  EvalReport report;
  report.counts = counts;
  report.precision = counts.predicted == 0
                         ? 1.0
                         : static_cast<double>(counts.matched) /
                               static_cast<double>(counts.predicted);
  report.recall = counts.gold == 0 ? 1.0
                                   : static_cast<double>(counts.matched) /
                                         static_cast<double>(counts.gold);
  const double denom = report.precision + report.recall;
  report.f1 = denom > 0.0 ? 2.0 * report.precision * report.recall / denom : 0.0;
  return report;
}

EvalReport SpanF1(std::span<const AspectSpan> gold,
                  std::span<const AspectSpan> predicted) {
  return ReportFromCounts(CountMatches(gold, predicted));
}

void WriteSpans(std::ostream &out, const std::string &sentence_id,
                std::span<const AspectSpan> spans) {
  for (const AspectSpan &s : spans) {
    out << sentence_id << '\t' << s.begin << '\t' << s.end << '\t' << s.text
        << '\n';
  }
}

}  // namespace ate
