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

#include "ate/vocabulary.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "ate/errors.h"

namespace ate {

Index::Index(std::string unknown) { Add(unknown); }

int Index::Add(std::string_view entry) {
  auto it = ids_.find(std::string(entry));
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(entries_.size());
  entries_.emplace_back(entry);
  ids_.emplace(std::string(entry), id);
  return id;
}

int Index::Lookup(std::string_view entry) const {
  auto it = ids_.find(std::string(entry));
  return it == ids_.end() ? 0 : it->second;
}

bool Index::Contains(std::string_view entry) const {
  return ids_.count(std::string(entry)) > 0;
}

Vocabulary::Vocabulary()
    : words_(std::string(kUnknownWord)),
      up_(std::string(kUnknownRelation)),
      down_(InverseRelation(kUnknownRelation)) {
  down_.Add(kInverseRootRelation);
}

void Vocabulary::AddRelation(std::string_view relation) {
  up_.Add(relation);
  down_.Add(InverseRelation(relation));
}

Vocabulary Vocabulary::Build(
    std::span<const Sentence> relation_source,
    std::span<const std::span<const Sentence>> extra) {
  Vocabulary vocab;
  for (const Sentence &s : relation_source) {
    for (const Token &t : s.tokens) {
      vocab.AddWord(t.surface);
      vocab.AddRelation(t.relation);
    }
  }
  for (auto corpus : extra) {
    for (const Sentence &s : corpus) {
      for (const Token &t : s.tokens) vocab.AddWord(t.surface);
    }
  }
  return vocab;
}

Vocabulary Vocabulary::FromLists(const std::vector<std::string> &words,
                                 const std::vector<std::string> &up,
                                 const std::vector<std::string> &down) {
  Vocabulary vocab;
  vocab.words_ = Index(words.empty() ? std::string(kUnknownWord) : words[0]);
  for (const auto &w : words) vocab.words_.Add(w);
  vocab.up_ = Index(up.empty() ? std::string(kUnknownRelation) : up[0]);
  for (const auto &r : up) vocab.up_.Add(r);
  vocab.down_ = Index(down.empty() ? InverseRelation(kUnknownRelation)
                                   : down[0]);
  for (const auto &r : down) vocab.down_.Add(r);
  return vocab;
}

double OovInitLimit(int dim) { return 0.25 / std::sqrt(static_cast<double>(dim)); }

namespace {

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool ParseDouble(std::string_view text, double &out) {
  const char *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

void FillMissing(EmbeddingTable &table, Rng &rng) {
  std::uniform_real_distribution<double> dist(-OovInitLimit(table.dim()),
                                              OovInitLimit(table.dim()));
  for (std::size_t r = 0; r < table.matrix.rows(); ++r) {
    if (!table.random_init[r]) continue;
    for (double &v : table.matrix.row(r)) v = dist(rng);
    if (r > 0) ++table.oov_count;
  }
}

}  // namespace

EmbeddingTable LoadEmbeddings(std::istream &in, const Vocabulary &vocab,
                              int dim, Rng &rng, const std::string &source) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    throw DataError(source, 1, "missing header \"<count> <dim>\"");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = SplitSpaces(line);
  long count = 0;
  int file_dim = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(),
                      count).ec != std::errc() ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(),
                      file_dim).ec != std::errc()) {
    throw DataError(source, 1, "malformed header, expected \"<count> <dim>\"");
  }
  if (file_dim != dim) {
    throw DataError(source, 1, "dimension mismatch: file has " +
                                   std::to_string(file_dim) + ", expected " +
                                   std::to_string(dim));
  }

  const auto rows = static_cast<std::size_t>(vocab.words().size());
  EmbeddingTable table;
  table.matrix = Tensor({rows, static_cast<std::size_t>(dim)});
  table.random_init.assign(rows, true);

  long seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = SplitSpaces(line);
    if (fields.empty()) continue;
    ++seen;
    const auto values = fields.size() - 1;
    if (values < static_cast<std::size_t>(dim)) {
      throw DataError(source, line_no,
                      "truncated line: " + std::to_string(values) +
                          " values, expected " + std::to_string(dim));
    }
    if (values > static_cast<std::size_t>(dim)) {
      throw DataError(source, line_no,
                      "malformed line: " + std::to_string(values) +
                          " values, expected " + std::to_string(dim));
    }
    std::vector<double> parsed(dim);
    for (int j = 0; j < dim; ++j) {
      if (!ParseDouble(fields[j + 1], parsed[j])) {
        throw DataError(source, line_no,
                        "unparseable float '" + std::string(fields[j + 1]) +
                            "'");
      }
    }
    if (!vocab.words().Contains(fields[0])) continue;
    const int id = vocab.WordId(fields[0]);
    if (!table.random_init[id]) continue;  // first occurrence wins
    std::copy(parsed.begin(), parsed.end(), table.matrix.row(id).begin());
    table.random_init[id] = false;
  }
  if (seen < count) {
    throw DataError(source, line_no,
                    "truncated file: header declares " + std::to_string(count) +
                        " vectors, found " + std::to_string(seen));
  }
  FillMissing(table, rng);
  return table;
}

EmbeddingTable LoadEmbeddingsFile(const std::string &path,
                                  const Vocabulary &vocab, int dim, Rng &rng) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open embedding file");
  return LoadEmbeddings(in, vocab, dim, rng, path);
}

EmbeddingTable RandomEmbeddings(const Vocabulary &vocab, int dim, Rng &rng) {
  const auto rows = static_cast<std::size_t>(vocab.words().size());
  EmbeddingTable table;
  table.matrix = Tensor({rows, static_cast<std::size_t>(dim)});
  table.random_init.assign(rows, true);
  FillMissing(table, rng);
  return table;
}

}  // namespace ate
