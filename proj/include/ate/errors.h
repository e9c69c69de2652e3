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

#ifndef ATE_ERRORS_H_
#define ATE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ate {

// Bad input data: corpus, embedding file or tree structure. Carries the
// source name and 1-based line number when known (line 0 = unknown).
class DataError : public std::runtime_error {
 public:
  DataError(const std::string &source, int line, const std::string &message)
      : std::runtime_error(Format(source, line, message)),
        source_(source),
        line_(line) {}

  const std::string &source() const { return source_; }
  int line() const { return line_; }

 private:
  static std::string Format(const std::string &source, int line,
                            const std::string &message) {
    std::string out = source.empty() ? "<input>" : source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + message;
  }

  std::string source_;
  int line_;
};

// Tensor shapes that do not fit the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite loss or gradient during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corrupt, truncated or incompatible model file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ate

#endif  // ATE_ERRORS_H_
