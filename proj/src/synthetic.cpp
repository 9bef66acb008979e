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

#include "dgsum/synthetic.hpp"

#include <sstream>
#include <string>

#include "dgsum/random.hpp"

namespace dgsum {
namespace {

template <std::size_t N>
const char* pick(std::mt19937_64& rng, const char* const (&options)[N]) {
  return options[uniform_index(rng, N)];
}

std::vector<std::string> split(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

constexpr const char* kSpeakers[] = {"PM", "ME", "ID", "UI"};
constexpr const char* kComponents[] = {"button", "case", "screen", "wheel", "logo"};
constexpr const char* kColours[] = {"yellow", "red", "blue", "green", "black"};
constexpr const char* kMaterials[] = {"rubber", "plastic", "wood", "titanium"};
constexpr const char* kShapes[] = {"round", "curved", "flat", "double"};
constexpr const char* kCodenames[] = {"zapdrive", "kwikflip", "moonbeam"};

constexpr const char* kFiller[] = {"okay", "yeah", "right", "mm-hmm", "sure", "so",
                                   "well", "um", "the", "that", "it", "we"};

}  // namespace

std::vector<Meeting> make_synthetic_corpus(const SyntheticOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<Meeting> out;
  for (int k = 0; k < options.meetings; ++k) {
    const std::string component = pick(rng, kComponents);
    const std::string colour = pick(rng, kColours);
    const std::string material = pick(rng, kMaterials);
    const std::string shape = pick(rng, kShapes);
    const std::string codename = pick(rng, kCodenames);
    std::string rival = pick(rng, kColours);
    if (rival == colour) rival = "grey";

    // Opening question, a proposal, a counter-proposal, agreement, then
    // elaborations up to the target length.
    std::vector<std::string> lines = {
        "what colour should the " + component + " be ?",
        "i think " + colour + " would be nice for the " + component,
        "but " + rival + " is more standard",
        "okay " + colour + " it is then",
    };
    const std::vector<std::string> extra = {
        "we could make it out of " + material,
        "and the " + component + " should be " + shape,
        "the " + codename + " prototype used " + material + " too",
        "how much does " + material + " cost ?",
        "it is quite cheap actually",
    };
    const int span = options.max_utterances - options.min_utterances + 1;
    const int n = options.min_utterances + static_cast<int>(uniform_index(rng, span));
    for (int i = 4; i < n; ++i) lines.push_back(extra[(i - 4) % extra.size()]);
    lines.resize(n);

    Meeting m;
    m.id = "syn" + std::to_string(k);
    for (int i = 0; i < n; ++i) {
      m.utterances.push_back({i, kSpeakers[(i + k) % 4], split(lines[i])});
    }
    m.relations = {{0, RelationType::kQuestionAnswer, 1},
                   {1, RelationType::kContrast, 2},
                   {2, RelationType::kAcknowledgment, 3}};
    for (int i = 4; i < n; ++i) {
      const auto idx = (i - 4) % extra.size();
      if (idx == 3) {
        m.relations.push_back({i, RelationType::kQuestionAnswer, i + 1 < n ? i + 1 : i - 1});
      } else if (idx == 2) {
        m.relations.push_back({i - 1, RelationType::kExplanation, i});
      } else {
        m.relations.push_back({i - 1, RelationType::kElaboration, i});
      }
    }
    std::string summary = "the team chose a " + colour + " ";
    if (n > 4) summary += material + " ";
    summary += component;
    if (n > 6) summary += " like " + codename;
    m.summary = split(summary);
    validate(m);
    out.push_back(std::move(m));
  }
  return out;
}

Meeting random_meeting(std::mt19937_64& rng, int max_utterances, int max_relations,
                       bool with_summary) {
  Meeting m;
  m.id = "rand" + std::to_string(rng() % 100000);
  const int n = 1 + static_cast<int>(uniform_index(rng, max_utterances));
  for (int i = 0; i < n; ++i) {
    Utterance u;
    u.index = i;
    u.speaker = kSpeakers[uniform_index(rng, 4)];
    const int len = 1 + static_cast<int>(uniform_index(rng, 6));
    for (int j = 0; j < len; ++j) {
      u.tokens.push_back(uniform_index(rng, 3) == 0 ? pick(rng, kColours)
                                                    : pick(rng, kFiller));
    }
    m.utterances.push_back(std::move(u));
  }
  if (n > 1) {
    const int r = static_cast<int>(uniform_index(rng, max_relations + 1));
    for (int k = 0; k < r; ++k) {
      const int s = static_cast<int>(uniform_index(rng, n));
      int t = static_cast<int>(uniform_index(rng, n - 1));
      if (t >= s) ++t;
      const auto type = static_cast<RelationType>(uniform_index(rng, kNumRelationTypes));
      m.relations.push_back({s, type, t});
    }
  }
  if (with_summary) {
    std::vector<std::string> summary;
    const int len = 1 + static_cast<int>(uniform_index(rng, 4));
    for (int j = 0; j < len; ++j) summary.push_back(pick(rng, kColours));
    m.summary = summary;
  }
  return m;
}

}  // namespace dgsum
