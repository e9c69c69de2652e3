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


// Generated corpora for tests, the acceptance suite and demos.

#ifndef ATE_SYNTHETIC_H_
#define ATE_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "ate/corpus.h"

namespace ate {

// Review-like sentences built from a handful of templates. Aspect terms come
// from a fixed lexicon, so labels follow from the words and their place in
// the tree. Trees are hand-written per template.
std::vector<Sentence> TemplateCorpus(int count, std::uint64_t seed);

// Sentences with random words, uniformly random trees, random relations and
// random BIO labels (spans only, no orphan I-AP).
std::vector<Sentence> RandomCorpus(int count, int min_length, int max_length,
                                   std::uint64_t seed);

// "the hard disc is great": five tokens, two levels below the root, one
// node with three dependents. Used as the default gradient-check input.
Sentence BranchingSentence();

// A random valid head array (1-based heads, 0 for the root) of length n.
std::vector<int> RandomHeads(int n, std::uint64_t seed);

}  // namespace ate

#endif  // ATE_SYNTHETIC_H_
