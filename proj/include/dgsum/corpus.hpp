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
/// Discourse-annotated meetings: data model, JSONL ingestion, vocabulary
/// construction and split handling.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dgsum/errors.hpp"

namespace dgsum {

/// The closed set of dialogue discourse relation labels.
enum class RelationType : int {
  kComment = 0,
  kClarificationQuestion,
  kElaboration,
  kAcknowledgment,
  kContinuation,
  kExplanation,
  kConditional,
  kQuestionAnswer,
  kAlternation,
  kQuestionElaboration,
  kResult,
  kBackground,
  kNarration,
  kCorrection,
  kParallel,
  kContrast,
};

inline constexpr int kNumRelationTypes = 16;

/// All relation types in label-table order.
const std::array<RelationType, kNumRelationTypes>& all_relation_types();

std::string_view to_string(RelationType type);

/// Throws ValidationError("unknown relation label ...") outside the closed set.
RelationType parse_relation_type(std::string_view label);

struct Utterance {
  int index = 0;
  std::string speaker;
  std::vector<std::string> tokens;

  bool operator==(const Utterance&) const = default;
};

/// One (source, relation, target) discourse edge between utterances.
struct DiscourseAnnotation {
  int source = 0;
  RelationType relation = RelationType::kComment;
  int target = 0;

  bool operator==(const DiscourseAnnotation&) const = default;
};

struct Meeting {
  std::string id;
  std::vector<Utterance> utterances;
  std::vector<DiscourseAnnotation> relations;
  std::optional<std::vector<std::string>> summary;

  std::size_t num_words() const;

  bool operator==(const Meeting&) const = default;
};

/// Checks every Meeting invariant; throws ValidationError naming the meeting.
void validate(const Meeting& meeting);

/// Parses one JSONL record. Tokens and summary words are lowercased.
Meeting parse_meeting(std::string_view json_line);
std::string serialize_meeting(const Meeting& meeting);

/// Reads a JSONL corpus. Malformed lines raise ParseError with the 1-based
/// line number; invariant violations raise ValidationError.
std::vector<Meeting> load_meetings(const std::filesystem::path& path);
std::vector<Meeting> read_meetings(std::istream& in);
void save_meetings(const std::filesystem::path& path,
                   const std::vector<Meeting>& meetings);
void write_meetings(std::ostream& out, const std::vector<Meeting>& meetings);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kNumReserved = 4;
  static constexpr int kDefaultMaxSize = 5806;

  /// Reserved tokens only.
  Vocabulary();
  /// Reserved tokens followed by `words` in id order.
  explicit Vocabulary(const std::vector<std::string>& words);

  int size() const { return static_cast<int>(id_to_word_.size()); }
  bool contains(std::string_view word) const;
  /// Id of `word`, or kUnk.
  int id(std::string_view word) const;
  const std::string& word(int id) const;
  const std::vector<std::string>& words() const { return id_to_word_; }

  bool operator==(const Vocabulary& other) const {
    return id_to_word_ == other.id_to_word_;
  }

 private:
  std::vector<std::string> id_to_word_;
  std::unordered_map<std::string, int> word_to_id_;
};

/// Keeps the (max_size - 4) most frequent words over utterance tokens and
/// reference summaries; ties go to the word seen first.
Vocabulary build_vocabulary(const std::vector<Meeting>& meetings,
                            int max_size = Vocabulary::kDefaultMaxSize);

/// Speaker strings to one-hot slots. Slot 0 is shared by unseen speakers.
class SpeakerIndex {
 public:
  SpeakerIndex();
  explicit SpeakerIndex(const std::vector<std::string>& speakers);

  int size() const { return static_cast<int>(names_.size()); }
  int id(std::string_view speaker) const;
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const SpeakerIndex& other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
};

SpeakerIndex build_speaker_index(const std::vector<Meeting>& meetings);

/// Source words that are out of the fixed vocabulary, addressed by ids
/// starting at vocab.size().
struct ExtendedVocab {
  int base = 0;
  std::vector<std::string> words;

  int size() const { return static_cast<int>(words.size()); }
  /// Extended id of `word`, or -1.
  int find(std::string_view word) const;
};

struct CopyEncoding {
  /// Per utterance: fixed-vocabulary ids (OOV mapped to UNK).
  std::vector<std::vector<int>> ids;
  /// Per utterance: ids where OOV words use their extended id.
  std::vector<std::vector<int>> extended_ids;
  ExtendedVocab oov;
};

CopyEncoding encode_for_copy(const Vocabulary& vocab, const Meeting& meeting);

/// Resolves an id from vocab or the extended map back to a word.
const std::string& lookup_word(const Vocabulary& vocab,
                               const ExtendedVocab& oov, int id);

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;
};

/// Reads `[train]` / `[dev]` / `[test]` sections of meeting ids.
SplitManifest load_split_manifest(const std::filesystem::path& path);
SplitManifest parse_split_manifest(std::istream& in);

struct CorpusSplits {
  std::vector<Meeting> train;
  std::vector<Meeting> dev;
  std::vector<Meeting> test;
};

/// Selects meetings per manifest section, in manifest order. Unknown ids
/// raise ValidationError.
CorpusSplits apply_splits(const std::vector<Meeting>& meetings,
                          const SplitManifest& manifest);

}  // namespace dgsum
