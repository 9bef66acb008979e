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

#include "dgsum/pseudo.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_map>

namespace dgsum {
namespace {

// Design-meeting vocabulary. Deliberately small; real corpora should pass
// an external tagger or a lexicon file.
constexpr const char* kNouns[] = {
    "remote", "control", "controls", "button", "buttons", "colour", "colours",
    "color", "colors", "design", "designs", "shape", "shapes", "case", "cases",
    "battery", "batteries", "chip", "chips", "screen", "display", "interface",
    "user", "users", "price", "cost", "costs", "budget", "market", "marketing",
    "product", "products", "material", "materials", "plastic", "rubber",
    "wood", "titanium", "logo", "company", "team", "meeting", "project",
    "manager", "designer", "expert", "function", "functions", "feature",
    "features", "menu", "channel", "channels", "volume", "power", "scroll",
    "wheel", "speech", "voice", "recognition", "television", "tv", "set",
    "teletext", "lcd", "kinetic", "energy", "solar", "cell", "cells", "panel",
    "trend", "trends", "fashion", "fruit", "vegetables", "banana", "apple",
    "idea", "ideas", "prototype", "model", "component", "components", "size",
    "weight", "target", "group", "age", "people", "customer", "customers",
    "survey", "research", "report", "presentation", "drawing", "whiteboard",
    "agenda", "decision", "decisions", "requirement", "requirements", "goal",
    "time", "minute", "minutes", "euro", "euros", "profit", "sale", "sales",
    "corporate", "identity", "slogan", "image", "style", "look", "feel",
    "layout", "number", "numbers", "key", "keys", "light", "lights", "led",
    "sensor", "sample", "speaker", "infrared", "signal", "device", "devices",
    "audio", "video", "standby", "mute", "option", "options", "question",
    "answer", "problem", "problems", "solution", "spongy", "sponge", "jog",
    "dial", "cover", "covers", "holder", "room", "hand", "finger", "thumb",
};

constexpr const char* kAdjectives[] = {
    "standard", "new", "old", "big", "small", "large", "little", "simple",
    "easy", "difficult", "hard", "soft", "cheap", "expensive", "nice", "good",
    "bad", "great", "important", "yellow", "red", "blue", "green", "black",
    "white", "grey", "gray", "orange", "pink", "purple", "bright", "dark",
    "round", "curved", "flat", "double", "single", "fancy", "trendy",
    "modern", "classic", "original", "basic", "main", "final", "functional",
    "conceptual", "detailed", "technical", "young", "elderly", "comfortable",
    "ergonomic", "fresh", "innovative", "creative", "special", "different",
    "same", "whole", "useful", "useless", "friendly", "intuitive", "slim",
    "thin", "thick", "light-weight", "heavy", "advanced", "digital", "rechargeable",
};

const std::unordered_map<std::string, PosTag>& builtin_lexicon() {
  static const auto lexicon = [] {
    std::unordered_map<std::string, PosTag> m;
    for (const char* w : kNouns) m.emplace(w, PosTag::kNoun);
    for (const char* w : kAdjectives) m.emplace(w, PosTag::kAdj);
    return m;
  }();
  return lexicon;
}

PosTagger tagger_from(std::shared_ptr<const std::unordered_map<std::string, PosTag>> lex) {
  return [lex](std::span<const std::string> tokens) {
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (const auto& t : tokens) {
      const auto it = lex->find(t);
      tags.push_back(it == lex->end() ? PosTag::kOther : it->second);
    }
    return tags;
  };
}

constexpr const char* kWhWords[] = {"what", "who",  "why",   "where", "when",
                                    "which", "how", "whose", "whom"};

}  // namespace

PosTagger default_tagger() {
  return tagger_from(std::shared_ptr<const std::unordered_map<std::string, PosTag>>(
      &builtin_lexicon(), [](const auto*) {}));
}

PosTagger lexicon_tagger(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  auto lex = std::make_shared<std::unordered_map<std::string, PosTag>>();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word, tag;
    if (!(fields >> word)) continue;
    if (!(fields >> tag)) {
      throw ParseError("line " + std::to_string(line_no) + ": missing tag");
    }
    if (tag == "NOUN") {
      (*lex)[word] = PosTag::kNoun;
    } else if (tag == "ADJ") {
      (*lex)[word] = PosTag::kAdj;
    } else if (tag != "OTHER") {
      throw ParseError("line " + std::to_string(line_no) + ": unknown tag " + tag);
    }
  }
  return tagger_from(std::move(lex));
}

std::vector<int> extract_discourse_questions(const Meeting& meeting,
                                             QuestionEndpoint endpoint) {
  std::vector<int> out;
  for (const auto& r : meeting.relations) {
    if (r.relation != RelationType::kQuestionAnswer) continue;
    out.push_back(endpoint == QuestionEndpoint::kSource ? r.source : r.target);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> rule_based_questions(const Meeting& meeting) {
  std::vector<int> out;
  for (const auto& u : meeting.utterances) {
    if (u.tokens.empty()) continue;
    const bool wh = std::find(std::begin(kWhWords), std::end(kWhWords),
                              u.tokens.front()) != std::end(kWhWords);
    if (wh || u.tokens.back() == "?") out.push_back(u.index);
  }
  return out;
}

bool question_filter(std::span<const std::string> tokens, const PosTagger& tagger) {
  const auto tags = tagger(tokens);
  if (tags.size() != tokens.size()) {
    throw ValidationError("tagger returned " + std::to_string(tags.size()) +
                          " tags for " + std::to_string(tokens.size()) + " tokens");
  }
  return std::any_of(tags.begin(), tags.end(), [](PosTag t) {
    return t == PosTag::kNoun || t == PosTag::kAdj;
  });
}

PseudoCorpus build_pseudo_corpus(const std::vector<Meeting>& meetings,
                                 const PseudoOptions& options,
                                 const PosTagger& tagger) {
  if (options.window < 1) throw ValidationError("pseudo window must be >= 1");
  PseudoCorpus corpus;
  for (const auto& m : meetings) {
    const auto questions = options.source == QuestionSource::kDiscourse
                               ? extract_discourse_questions(m, options.endpoint)
                               : rule_based_questions(m);
    const int n = static_cast<int>(m.utterances.size());
    for (int q : questions) {
      ++corpus.questions;
      const auto& question = m.utterances[q].tokens;
      if (!question_filter(question, tagger)) {
        ++corpus.filtered_out;
        continue;
      }
      const int first = q + 1;
      const int last = std::min(q + options.window, n - 1);
      if (first > last) {
        ++corpus.empty_windows;
        continue;
      }

      PseudoPair pair;
      pair.pseudo_summary = question;
      Meeting& pm = pair.pseudo_meeting;
      pm.id = m.id + "#q" + std::to_string(q);
      for (int i = first; i <= last; ++i) {
        Utterance u = m.utterances[i];
        u.index = i - first;
        pm.utterances.push_back(std::move(u));
      }
      for (const auto& r : m.relations) {
        if (r.source >= first && r.source <= last && r.target >= first &&
            r.target <= last) {
          pm.relations.push_back({r.source - first, r.relation, r.target - first});
        }
      }
      pm.summary = question;
      validate(pm);
      corpus.pairs.push_back(std::move(pair));
    }
  }
  return corpus;
}

std::string source_meeting_id(const std::string& pseudo_id) {
  const auto pos = pseudo_id.rfind("#q");
  return pos == std::string::npos ? pseudo_id : pseudo_id.substr(0, pos);
}

std::vector<Meeting> pseudo_meetings(const PseudoCorpus& corpus) {
  std::vector<Meeting> out;
  out.reserve(corpus.pairs.size());
  for (const auto& p : corpus.pairs) out.push_back(p.pseudo_meeting);
  return out;
}

}  // namespace dgsum
