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

#include "dgsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace dgsum {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kNumRelationTypes> kRelationLabels = {
    "comment",       "clarification-question", "elaboration",
    "acknowledgment", "continuation",          "explanation",
    "conditional",   "question-answer",        "alternation",
    "question-elaboration", "result",          "background",
    "narration",     "correction",             "parallel",
    "contrast",
};

const std::array<std::string, Vocabulary::kNumReserved> kReservedWords = {
    "<pad>", "<unk>", "<s>", "</s>"};

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> lowercase_tokens(const json& arr,
                                          std::string_view what) {
  if (!arr.is_array()) {
    throw ParseError(std::string(what) + " must be an array of strings");
  }
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& t : arr) {
    if (!t.is_string()) {
      throw ParseError(std::string(what) + " must be an array of strings");
    }
    out.push_back(lowercase(t.get<std::string>()));
  }
  return out;
}

}  // namespace

const std::array<RelationType, kNumRelationTypes>& all_relation_types() {
  static const auto types = [] {
    std::array<RelationType, kNumRelationTypes> a{};
    for (int i = 0; i < kNumRelationTypes; ++i) {
      a[i] = static_cast<RelationType>(i);
    }
    return a;
  }();
  return types;
}

std::string_view to_string(RelationType type) {
  return kRelationLabels.at(static_cast<std::size_t>(type));
}

RelationType parse_relation_type(std::string_view label) {
  for (int i = 0; i < kNumRelationTypes; ++i) {
    if (kRelationLabels[i] == label) return static_cast<RelationType>(i);
  }
  throw ValidationError("unknown relation label \"" + std::string(label) +
                        "\"");
}

std::size_t Meeting::num_words() const {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.tokens.size();
  return n;
}

void validate(const Meeting& meeting) {
  const auto fail = [&](const std::string& what) {
    throw ValidationError("meeting " + meeting.id + ": " + what);
  };
  if (meeting.utterances.empty()) fail("no utterances");
  const int n = static_cast<int>(meeting.utterances.size());
  for (int i = 0; i < n; ++i) {
    const auto& u = meeting.utterances[i];
    if (u.index != i) fail("utterance indices must be contiguous from 0");
    if (u.tokens.empty()) {
      fail("utterance " + std::to_string(i) + " has no tokens");
    }
  }
  for (const auto& r : meeting.relations) {
    if (r.source < 0 || r.source >= n || r.target < 0 || r.target >= n) {
      fail("relation (" + std::to_string(r.source) + ", " +
           std::string(to_string(r.relation)) + ", " +
           std::to_string(r.target) + ") out of range for " +
           std::to_string(n) + " utterances");
    }
    if (r.source == r.target) {
      fail("relation endpoints must differ (utterance " +
           std::to_string(r.source) + ")");
    }
  }
}

Meeting parse_meeting(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("record must be a JSON object");

  Meeting m;
  try {
    m.id = j.at("meeting_id").get<std::string>();
    const auto& utts = j.at("utterances");
    if (!utts.is_array()) throw ParseError("utterances must be an array");
    for (const auto& u : utts) {
      Utterance utt;
      utt.index = static_cast<int>(m.utterances.size());
      utt.speaker = u.at("speaker").get<std::string>();
      utt.tokens = lowercase_tokens(u.at("tokens"), "tokens");
      m.utterances.push_back(std::move(utt));
    }
    if (j.contains("relations") && !j.at("relations").is_null()) {
      for (const auto& r : j.at("relations")) {
        if (!r.is_array() || r.size() != 3 || !r[0].is_number_integer() ||
            !r[1].is_string() || !r[2].is_number_integer()) {
          throw ParseError("relation must be [int, label, int]");
        }
        m.relations.push_back({r[0].get<int>(),
                               parse_relation_type(r[1].get<std::string>()),
                               r[2].get<int>()});
      }
    }
    if (j.contains("summary") && !j.at("summary").is_null()) {
      m.summary = lowercase_tokens(j.at("summary"), "summary");
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  validate(m);
  return m;
}

std::string serialize_meeting(const Meeting& meeting) {
  json j;
  j["meeting_id"] = meeting.id;
  j["utterances"] = json::array();
  for (const auto& u : meeting.utterances) {
    j["utterances"].push_back({{"speaker", u.speaker}, {"tokens", u.tokens}});
  }
  j["relations"] = json::array();
  for (const auto& r : meeting.relations) {
    j["relations"].push_back(
        json::array({r.source, std::string(to_string(r.relation)), r.target}));
  }
  j["summary"] = meeting.summary ? json(*meeting.summary) : json(nullptr);
  return j.dump();
}

std::vector<Meeting> read_meetings(std::istream& in) {
  std::vector<Meeting> meetings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      meetings.push_back(parse_meeting(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  return meetings;
}

std::vector<Meeting> load_meetings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_meetings(in);
}

void write_meetings(std::ostream& out, const std::vector<Meeting>& meetings) {
  for (const auto& m : meetings) out << serialize_meeting(m) << '\n';
}

void save_meetings(const std::filesystem::path& path,
                   const std::vector<Meeting>& meetings) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  write_meetings(out, meetings);
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  id_to_word_.assign(kReservedWords.begin(), kReservedWords.end());
  id_to_word_.insert(id_to_word_.end(), words.begin(), words.end());
  for (int i = 0; i < size(); ++i) {
    if (!word_to_id_.emplace(id_to_word_[i], i).second) {
      throw ValidationError("duplicate vocabulary entry \"" + id_to_word_[i] +
                            "\"");
    }
  }
}

bool Vocabulary::contains(std::string_view word) const {
  return word_to_id_.count(std::string(word)) > 0;
}

int Vocabulary::id(std::string_view word) const {
  const auto it = word_to_id_.find(std::string(word));
  return it == word_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::word(int id) const { return id_to_word_.at(id); }

Vocabulary build_vocabulary(const std::vector<Meeting>& meetings,
                            int max_size) {
  if (max_size < Vocabulary::kNumReserved + 1) {
    throw ValidationError("vocabulary max_size must be at least 5");
  }
  struct Entry {
    std::string word;
    int count = 0;
    int first_seen = 0;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string, std::size_t> slot;
  const auto count = [&](const std::string& w) {
    if (std::find(kReservedWords.begin(), kReservedWords.end(), w) !=
        kReservedWords.end()) {
      return;
    }
    const auto [it, inserted] = slot.emplace(w, entries.size());
    if (inserted) {
      entries.push_back({w, 0, static_cast<int>(entries.size())});
    }
    ++entries[it->second].count;
  };
  for (const auto& m : meetings) {
    for (const auto& u : m.utterances) {
      for (const auto& t : u.tokens) count(t);
    }
    if (m.summary) {
      for (const auto& t : *m.summary) count(t);
    }
  }
  if (entries.empty()) throw ValidationError("cannot build vocabulary from an empty corpus");

  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.count > b.count;
                   });
  const auto keep = std::min<std::size_t>(
      entries.size(), static_cast<std::size_t>(max_size - Vocabulary::kNumReserved));
  std::vector<std::string> words;
  words.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) words.push_back(entries[i].word);
  return Vocabulary(words);
}

// ---------------------------------------------------------------------------
// Speakers

SpeakerIndex::SpeakerIndex() : SpeakerIndex(std::vector<std::string>{}) {}

SpeakerIndex::SpeakerIndex(const std::vector<std::string>& speakers) {
  names_.push_back("<other>");
  names_.insert(names_.end(), speakers.begin(), speakers.end());
  for (int i = 0; i < size(); ++i) ids_.emplace(names_[i], i);
}

int SpeakerIndex::id(std::string_view speaker) const {
  const auto it = ids_.find(std::string(speaker));
  return it == ids_.end() ? 0 : it->second;
}

SpeakerIndex build_speaker_index(const std::vector<Meeting>& meetings) {
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  for (const auto& m : meetings) {
    for (const auto& u : m.utterances) {
      if (seen.insert(u.speaker).second) names.push_back(u.speaker);
    }
  }
  return SpeakerIndex(names);
}

// ---------------------------------------------------------------------------
// Copy encoding

int ExtendedVocab::find(std::string_view word) const {
  const auto it = std::find(words.begin(), words.end(), word);
  return it == words.end() ? -1 : base + static_cast<int>(it - words.begin());
}

CopyEncoding encode_for_copy(const Vocabulary& vocab, const Meeting& meeting) {
  CopyEncoding enc;
  enc.oov.base = vocab.size();
  std::unordered_map<std::string, int> oov_ids;
  for (const auto& u : meeting.utterances) {
    std::vector<int> ids;
    std::vector<int> ext;
    ids.reserve(u.tokens.size());
    ext.reserve(u.tokens.size());
    for (const auto& t : u.tokens) {
      const int id = vocab.id(t);
      if (id != Vocabulary::kUnk || t == vocab.word(Vocabulary::kUnk)) {
        ids.push_back(id);
        ext.push_back(id);
        continue;
      }
      auto [it, inserted] =
          oov_ids.emplace(t, enc.oov.base + enc.oov.size());
      if (inserted) enc.oov.words.push_back(t);
      ids.push_back(Vocabulary::kUnk);
      ext.push_back(it->second);
    }
    enc.ids.push_back(std::move(ids));
    enc.extended_ids.push_back(std::move(ext));
  }
  return enc;
}

const std::string& lookup_word(const Vocabulary& vocab,
                               const ExtendedVocab& oov, int id) {
  if (id >= 0 && id < vocab.size()) return vocab.word(id);
  const int k = id - oov.base;
  if (k < 0 || k >= oov.size()) {
    throw ValidationError("id " + std::to_string(id) +
                          " is outside vocabulary and copy map");
  }
  return oov.words[k];
}

// ---------------------------------------------------------------------------
// Splits

SplitManifest parse_split_manifest(std::istream& in) {
  SplitManifest manifest;
  std::vector<std::string>* section = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t == "[train]") {
      section = &manifest.train;
    } else if (t == "[dev]") {
      section = &manifest.dev;
    } else if (t == "[test]") {
      section = &manifest.test;
    } else if (t.front() == '[') {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unknown split header " + t);
    } else if (section == nullptr) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": meeting id before any split header");
    } else {
      section->push_back(t);
    }
  }
  return manifest;
}

SplitManifest load_split_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_split_manifest(in);
}

CorpusSplits apply_splits(const std::vector<Meeting>& meetings,
                          const SplitManifest& manifest) {
  std::unordered_map<std::string, const Meeting*> by_id;
  for (const auto& m : meetings) by_id.emplace(m.id, &m);
  const auto select = [&](const std::vector<std::string>& ids) {
    std::vector<Meeting> out;
    for (const auto& id : ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw ValidationError("split manifest names unknown meeting " + id);
      }
      out.push_back(*it->second);
    }
    return out;
  };
  return {select(manifest.train), select(manifest.dev), select(manifest.test)};
}

}  // namespace dgsum
