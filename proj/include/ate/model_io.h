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


// Binary model files.
//
// Layout (all integers little-endian):
//   magic "ATEMODEL" | u32 version | u64 total file size
//   u32 n, then n config entries (string key, string value)
//   three string lists: words, up relations, down relations
//   u32 n, then n tensors (string name, u32 rank, rank x u64 extents,
//     raw little-endian float64 data)
//   u32 crc32 of every preceding byte
// Strings are a u64 length followed by the bytes.

#ifndef ATE_MODEL_IO_H_
#define ATE_MODEL_IO_H_

#include <cstdint>
#include <ostream>
#include <string>

#include "ate/config.h"
#include "ate/model.h"

namespace ate {

inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string SerializeModel(const Model &model);
// Throws FormatError on a bad magic, version mismatch, truncation, checksum
// failure or inconsistent contents.
Model DeserializeModel(const std::string &bytes);

void SaveModel(const Model &model, const std::string &path);
// When `requested` is given and differs from the stored config, the stored
// config wins and a warning naming the differing keys goes to `warn`.
Model LoadModel(const std::string &path, const ModelConfig *requested = nullptr,
                std::ostream *warn = nullptr);

}  // namespace ate

#endif  // ATE_MODEL_IO_H_
