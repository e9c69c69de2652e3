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

#ifndef ATE_CONFIG_H_
#define ATE_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ate {

// Which parts of the network are wired in:
//   full         tree (both passes) -> BiLSTM -> projection -> CRF
//   dtree-up     bottom-up pass only -> BiLSTM -> ...
//   dtree-down   top-down pass only -> BiLSTM -> ...
//   bidtree-crf  tree (both passes) -> projection -> CRF
//   bilstm-crf   word embeddings -> BiLSTM -> projection -> CRF
enum class Ablation { kFull, kDTreeUp, kDTreeDown, kBiDTreeCrf, kBiLstmCrf };

std::string_view AblationName(Ablation ablation);
std::optional<Ablation> ParseAblation(std::string_view name);

struct ModelConfig {
  int dim = 300;
  int variant = 3;
  Ablation ablation = Ablation::kFull;
  bool use_relation_terms = true;
  double dropout = 0.5;
  double l2 = 0.001;
  double learning_rate = 0.001;
  int batch_size = 20;
  double clip_norm = 5.0;
  int patience = 5;
  int max_epochs = 50;
  std::uint64_t seed = 1;

  bool has_bottom_up() const {
    return ablation == Ablation::kFull || ablation == Ablation::kDTreeUp ||
           ablation == Ablation::kBiDTreeCrf;
  }
  bool has_top_down() const {
    return ablation == Ablation::kFull || ablation == Ablation::kDTreeDown ||
           ablation == Ablation::kBiDTreeCrf;
  }
  bool has_tree() const { return has_bottom_up() || has_top_down(); }
  bool has_lstm() const { return ablation != Ablation::kBiDTreeCrf; }

  // Throws std::invalid_argument naming the first bad field.
  void Validate() const;

  std::map<std::string, std::string> ToKeyValues() const;
  // Unknown keys are errors; missing keys keep their defaults.
  static ModelConfig FromKeyValues(const std::map<std::string, std::string> &kv);

  bool operator==(const ModelConfig &) const = default;
};

}  // namespace ate

#endif  // ATE_CONFIG_H_
