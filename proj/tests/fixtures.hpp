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

// Shared meetings and tiny model configurations for the test binaries.

#pragma once

#include <string>
#include <vector>

#include "dgsum/corpus.hpp"
#include "dgsum/model.hpp"

namespace dgsum::testing {

// Four utterances, three annotations: U1 asks, U2 answers, U3 continues U1,
// U4 contrasts U1. Vertex ids: U1..U4 = 0..3, QA = 4, Continuation = 5,
// Contrast = 6, global = 7.
inline const char* const kFigureMeetingJson =
    R"({"meeting_id":"fig","utterances":[)"
    R"({"speaker":"PM","tokens":["Let's","use","a","rubber","case","?"]},)"
    R"({"speaker":"ID","tokens":["rubber","is","too","soft"]},)"
    R"({"speaker":"PM","tokens":["and","it","is","cheap"]},)"
    R"({"speaker":"ME","tokens":["but","plastic","is","more","standard"]}],)"
    R"("relations":[[0,"question-answer",1],[2,"continuation",0],[0,"contrast",3]],)"
    R"("summary":["the","team","chose","a","plastic","case"]})";

inline Meeting figure_meeting() { return parse_meeting(kFigureMeetingJson); }

// Three utterances, two annotations, a four-word summary that copies the
// out-of-vocabulary word "zapdrive".
inline Meeting gradient_meeting() {
  Meeting m;
  m.id = "grad";
  m.utterances = {{0, "PM", {"what", "colour", "for", "zapdrive", "?"}},
                  {1, "ID", {"yellow", "is", "nice"}},
                  {2, "ME", {"but", "red", "zapdrive"}}};
  m.relations = {{0, RelationType::kQuestionAnswer, 1},
                 {1, RelationType::kContrast, 2}};
  m.summary = std::vector<std::string>{"yellow", "zapdrive", "is", "nice"};
  return m;
}

// 25 utterances with three question-answer annotations: the question at 2
// has no noun or adjective, the one at 5 survives, the one at 24 is last.
inline Meeting pseudo_fixture_meeting() {
  const char* const speakers[] = {"PM", "ID", "ME", "UI"};
  Meeting m;
  m.id = "pq";
  for (int i = 0; i < 25; ++i) {
    m.utterances.push_back({i, speakers[i % 4], {"okay", "so", "point", std::to_string(i)}});
  }
  m.utterances[2].tokens = {"what", "is", "this", "here", "?"};
  m.utterances[5].tokens = {"what's", "the", "standard", "colour", "?"};
  m.utterances[6].tokens = {"it", "is", "yellow"};
  m.utterances[24].tokens = {"which", "button", "do", "we", "want", "?"};
  m.relations = {{2, RelationType::kQuestionAnswer, 3},
                 {5, RelationType::kQuestionAnswer, 6},
                 {4, RelationType::kContrast, 14},
                 {7, RelationType::kElaboration, 8},
                 {6, RelationType::kAcknowledgment, 15},
                 {15, RelationType::kContinuation, 16},
                 {24, RelationType::kQuestionAnswer, 23}};
  return m;
}

inline Vocabulary small_vocab() {
  return Vocabulary({"what", "colour", "for", "yellow", "is", "nice", "but", "red",
                     "the", "team", "chose", "a", "case", "plastic", "rubber", "?"});
}

inline SpeakerIndex small_speakers() { return SpeakerIndex({"PM", "ID", "ME"}); }

inline ModelConfig tiny_config(int hidden = 8, int emb = 8, int layers = 2) {
  ModelConfig c;
  c.hidden_size = hidden;
  c.word_emb_size = emb;
  c.num_gcn_layers = layers;
  c.dropout = 0.0;
  c.beam_size = 4;
  return c;
}

template <typename S>
Model<S> tiny_model(std::uint64_t seed, int hidden = 8, int emb = 8, int layers = 2) {
  return make_model<S>(tiny_config(hidden, emb, layers), small_vocab(),
                       small_speakers(), seed);
}

}  // namespace dgsum::testing
