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
/// Pseudo-summarization pairs mined from question-answer discourse: the
/// question becomes the summary of the utterances that follow it.

#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dgsum/corpus.hpp"

namespace dgsum {

enum class PosTag { kNoun, kAdj, kOther };

/// Coarse tagger: one tag per input token.
using PosTagger = std::function<std::vector<PosTag>(std::span<const std::string>)>;

/// Closed-lexicon tagger bundled for fixtures and small corpora.
PosTagger default_tagger();

/// Tagger from a "word<TAB or space>NOUN|ADJ" lexicon file; unlisted words
/// are OTHER.
PosTagger lexicon_tagger(const std::filesystem::path& path);

struct PseudoPair {
  std::vector<std::string> pseudo_summary;
  Meeting pseudo_meeting;  // summary field holds pseudo_summary
};

/// Which endpoint of a question-answer annotation is the question.
enum class QuestionEndpoint { kSource, kTarget };

std::vector<int> extract_discourse_questions(
    const Meeting& meeting, QuestionEndpoint endpoint = QuestionEndpoint::kSource);

/// Utterances that start with a WH-word or end with "?".
std::vector<int> rule_based_questions(const Meeting& meeting);

/// True iff the question has at least one noun or adjective. Throws
/// ValidationError when the tagger's output length differs from the input.
bool question_filter(std::span<const std::string> tokens, const PosTagger& tagger);

enum class QuestionSource { kDiscourse, kRule };

struct PseudoOptions {
  int window = 10;
  QuestionSource source = QuestionSource::kDiscourse;
  QuestionEndpoint endpoint = QuestionEndpoint::kSource;
};

struct PseudoCorpus {
  std::vector<PseudoPair> pairs;
  int questions = 0;         // candidate questions found
  int filtered_out = 0;      // rejected by question_filter
  int empty_windows = 0;     // question was the last utterance
};

/// Pairs each surviving question at q with utterances q+1 .. q+window
/// (clipped), re-indexed, keeping only annotations inside the window.
/// Pseudo meetings are named "<meeting_id>#q<q>".
PseudoCorpus build_pseudo_corpus(const std::vector<Meeting>& meetings,
                                 const PseudoOptions& options,
                                 const PosTagger& tagger);

/// Meeting id a pseudo pair was mined from ("abc#q3" -> "abc").
std::string source_meeting_id(const std::string& pseudo_id);

std::vector<Meeting> pseudo_meetings(const PseudoCorpus& corpus);

}  // namespace dgsum
