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


#include "ate/model_io.h"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <vector>

#include "ate/errors.h"

namespace ate {
namespace {

constexpr char kMagic[8] = {'A', 'T', 'E', 'M', 'O', 'D', 'E', 'L'};
constexpr std::size_t kHeaderSize = sizeof(kMagic) + 4 + 8;

static_assert(std::endian::native == std::endian::little,
              "model files assume a little-endian host");

class Writer {
 public:
  void Bytes(const void *data, std::size_t n) {
    out_.append(static_cast<const char *>(data), n);
  }
  template <typename T>
  void Pod(T v) {
    Bytes(&v, sizeof(v));
  }
  void String(const std::string &s) {
    Pod<std::uint64_t>(s.size());
    Bytes(s.data(), s.size());
  }
  void Strings(const std::vector<std::string> &list) {
    Pod<std::uint64_t>(list.size());
    for (const auto &s : list) String(s);
  }
  std::string &buffer() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string &data, std::size_t begin, std::size_t end)
      : data_(data), pos_(begin), end_(end) {}

  void Bytes(void *dst, std::size_t n) {
    if (n > end_ - pos_) throw FormatError("model file: unexpected end of data");
    std::memcpy(dst, data_.data() + pos_, n);
    pos_ += n;
  }
  template <typename T>
  T Pod() {
    T v;
    Bytes(&v, sizeof(v));
    return v;
  }
  std::string String() {
    const auto n = Pod<std::uint64_t>();
    if (n > end_ - pos_) throw FormatError("model file: string runs past end");
    std::string s(data_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::vector<std::string> Strings() {
    const auto n = Pod<std::uint64_t>();
    std::vector<std::string> list;
    for (std::uint64_t i = 0; i < n; ++i) list.push_back(String());
    return list;
  }
  bool done() const { return pos_ == end_; }

 private:
  const std::string &data_;
  std::size_t pos_;
  std::size_t end_;
};

std::uint32_t Crc32(const std::string &data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef *>(data.data()),
              static_cast<uInt>(n));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string SerializeModel(const Model &model) {
  Writer w;
  w.Bytes(kMagic, sizeof(kMagic));
  w.Pod<std::uint32_t>(kModelFormatVersion);
  w.Pod<std::uint64_t>(0);  // patched below

  const auto config = model.config.ToKeyValues();
  w.Pod<std::uint32_t>(config.size());
  for (const auto &[key, value] : config) {
    w.String(key);
    w.String(value);
  }
  w.Strings(model.vocab.words().entries());
  w.Strings(model.vocab.up_relations().entries());
  w.Strings(model.vocab.down_relations().entries());

  w.Pod<std::uint32_t>(model.params.size());
  for (const auto &p : model.params) {
    w.String(p->name);
    const Shape &shape = p->value.shape();
    w.Pod<std::uint32_t>(shape.size());
    for (std::size_t extent : shape) w.Pod<std::uint64_t>(extent);
    w.Bytes(p->value.data().data(), p->value.size() * sizeof(double));
  }

  std::string &bytes = w.buffer();
  const std::uint64_t total = bytes.size() + sizeof(std::uint32_t);
  std::memcpy(bytes.data() + sizeof(kMagic) + 4, &total, sizeof(total));
  const std::uint32_t crc = Crc32(bytes, bytes.size());
  w.Pod(crc);
  return bytes;
}

Model DeserializeModel(const std::string &bytes) {
  if (bytes.size() < kHeaderSize + 4 ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a model file (bad magic)");
  }
  Reader header(bytes, sizeof(kMagic), kHeaderSize);
  const auto version = header.Pod<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw FormatError("model file version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kModelFormatVersion) + ")");
  }
  const auto total = header.Pod<std::uint64_t>();
  if (bytes.size() < total) {
    throw FormatError("model file truncated: " + std::to_string(bytes.size()) +
                      " of " + std::to_string(total) + " bytes");
  }
  if (bytes.size() != total) {
    throw FormatError("model file has trailing data");
  }
  const std::size_t body_end = bytes.size() - 4;
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body_end, sizeof(stored));
  if (Crc32(bytes, body_end) != stored) {
    throw FormatError("model file checksum mismatch");
  }

  Reader r(bytes, kHeaderSize, body_end);
  std::map<std::string, std::string> kv;
  const auto n_config = r.Pod<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_config; ++i) {
    std::string key = r.String();
    kv[key] = r.String();
  }
  ModelConfig config;
  try {
    config = ModelConfig::FromKeyValues(kv);
  } catch (const std::invalid_argument &e) {
    throw FormatError(std::string("model file config: ") + e.what());
  }
  auto words = r.Strings();
  auto up = r.Strings();
  auto down = r.Strings();
  Vocabulary vocab = Vocabulary::FromLists(words, up, down);

  EmbeddingTable table;
  table.matrix = Tensor({static_cast<std::size_t>(vocab.words().size()),
                         static_cast<std::size_t>(config.dim)});
  Model model = BuildModel(config, std::move(vocab), table);

  const auto n_tensors = r.Pod<std::uint32_t>();
  if (n_tensors != model.params.size()) {
    throw FormatError("model file has " + std::to_string(n_tensors) +
                      " tensors, configuration needs " +
                      std::to_string(model.params.size()));
  }
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    const std::string name = r.String();
    Parameter *p = model.params.Find(name);
    if (p == nullptr) throw FormatError("model file: unexpected tensor " + name);
    Shape shape(r.Pod<std::uint32_t>());
    for (auto &extent : shape) extent = r.Pod<std::uint64_t>();
    if (shape != p->value.shape()) {
      throw FormatError("model file: tensor " + name + " has shape " +
                        ShapeString(shape) + ", expected " +
                        ShapeString(p->value.shape()));
    }
    r.Bytes(p->value.data().data(), p->value.size() * sizeof(double));
  }
  if (!r.done()) throw FormatError("model file: unread data before checksum");
  return model;
}

void SaveModel(const Model &model, const std::string &path) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("error writing " + path);
}

Model LoadModel(const std::string &path, const ModelConfig *requested,
                std::ostream *warn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  Model model = DeserializeModel(bytes);
  if (requested != nullptr && warn != nullptr) {
    const auto stored = model.config.ToKeyValues();
    const auto asked = requested->ToKeyValues();
    std::string differing;
    for (const auto &[key, value] : stored) {
      auto it = asked.find(key);
      if (it != asked.end() && it->second != value) {
        if (!differing.empty()) differing += ", ";
        differing += key + "=" + value + " (requested " + it->second + ")";
      }
    }
    if (!differing.empty()) {
      *warn << "warning: using the configuration stored in " << path << ": "
            << differing << "\n";
    }
  }
  return model;
}

}  // namespace ate
