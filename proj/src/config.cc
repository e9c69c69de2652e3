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

#include "ate/config.h"

#include <charconv>
#include <stdexcept>

namespace ate {

std::string_view AblationName(Ablation ablation) {
  switch (ablation) {
    case Ablation::kFull:
      return "full";
    case Ablation::kDTreeUp:
      return "dtree-up";
    case Ablation::kDTreeDown:
      return "dtree-down";
    case Ablation::kBiDTreeCrf:
      return "bidtree-crf";
    case Ablation::kBiLstmCrf:
      return "bilstm-crf";
  }
  return "?";
}

std::optional<Ablation> ParseAblation(std::string_view name) {
  for (Ablation a : {Ablation::kFull, Ablation::kDTreeUp, Ablation::kDTreeDown,
                     Ablation::kBiDTreeCrf, Ablation::kBiLstmCrf}) {
    if (AblationName(a) == name) return a;
  }
  return std::nullopt;
}

void ModelConfig::Validate() const {
  auto fail = [](const std::string &what) {
    throw std::invalid_argument("invalid config: " + what);
  };
  if (dim <= 0) fail("dim must be > 0");
  if (variant < 1 || variant > 3) fail("variant must be 1, 2 or 3");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must be in [0, 1)");
  if (!(l2 >= 0.0)) fail("l2 must be >= 0");
  if (!(learning_rate >= 0.0)) fail("learning rate must be >= 0");
  if (batch_size < 1) fail("batch size must be >= 1");
  if (!(clip_norm > 0.0)) fail("clip norm must be > 0");
  if (patience < 1) fail("patience must be >= 1");
  if (max_epochs < 1) fail("max epochs must be >= 1");
}

namespace {

// Shortest text that reads back to the same double.
std::string DoubleText(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
T Parse(const std::string &key, const std::string &text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("config key '" + key + "': bad value '" +
                                text + "'");
  }
  return value;
}

}  // namespace

std::map<std::string, std::string> ModelConfig::ToKeyValues() const {
  return {
      {"dim", std::to_string(dim)},
      {"variant", std::to_string(variant)},
      {"ablation", std::string(AblationName(ablation))},
      {"relation_terms", use_relation_terms ? "1" : "0"},
      {"dropout", DoubleText(dropout)},
      {"l2", DoubleText(l2)},
      {"lr", DoubleText(learning_rate)},
      {"batch", std::to_string(batch_size)},
      {"clip", DoubleText(clip_norm)},
      {"patience", std::to_string(patience)},
      {"max_epochs", std::to_string(max_epochs)},
      {"seed", std::to_string(seed)},
  };
}

ModelConfig ModelConfig::FromKeyValues(
    const std::map<std::string, std::string> &kv) {
  ModelConfig c;
  for (const auto &[key, value] : kv) {
    if (key == "dim") {
      c.dim = Parse<int>(key, value);
    } else if (key == "variant") {
      c.variant = Parse<int>(key, value);
    } else if (key == "ablation") {
      auto a = ParseAblation(value);
      if (!a) throw std::invalid_argument("unknown ablation '" + value + "'");
      c.ablation = *a;
    } else if (key == "relation_terms") {
      c.use_relation_terms = Parse<int>(key, value) != 0;
    } else if (key == "dropout") {
      c.dropout = Parse<double>(key, value);
    } else if (key == "l2") {
      c.l2 = Parse<double>(key, value);
    } else if (key == "lr") {
      c.learning_rate = Parse<double>(key, value);
    } else if (key == "batch") {
      c.batch_size = Parse<int>(key, value);
    } else if (key == "clip") {
      c.clip_norm = Parse<double>(key, value);
    } else if (key == "patience") {
      c.patience = Parse<int>(key, value);
    } else if (key == "max_epochs") {
      c.max_epochs = Parse<int>(key, value);
    } else if (key == "seed") {
      c.seed = Parse<std::uint64_t>(key, value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

}  // namespace ate
