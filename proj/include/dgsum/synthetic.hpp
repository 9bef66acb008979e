// Copyright 2026 The dgsum Authors
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

/// \file
/// Generators for design-meeting style fixture corpora and for random
/// meetings used by property tests.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dgsum/corpus.hpp"

namespace dgsum {

struct SyntheticOptions {
  int meetings = 12;
  int min_utterances = 4;
  int max_utterances = 8;
  std::uint64_t seed = 7;
};

/// Meetings about choosing a component's colour, material and shape, with
/// discourse annotations and a templated reference summary of at most ten
/// tokens.
std::vector<Meeting> make_synthetic_corpus(const SyntheticOptions& options);

/// Arbitrary valid meeting: 1..max_utterances utterances over a small word
/// list, 0..max_relations annotations with random labels.
Meeting random_meeting(std::mt19937_64& rng, int max_utterances, int max_relations,
                       bool with_summary = true);

}  // namespace dgsum
