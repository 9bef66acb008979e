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

#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "dgsum/corpus.hpp"
#include "dgsum/synthetic.hpp"
#include "fixtures.hpp"

using namespace dgsum;

namespace {

Meeting words_meeting(const std::vector<std::vector<std::string>>& utterances,
                      std::vector<std::string> summary = {}) {
  Meeting m;
  m.id = "m";
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    m.utterances.push_back({static_cast<int>(i), "A", utterances[i]});
  }
  if (!summary.empty()) m.summary = summary;
  return m;
}

}  // namespace

TEST_CASE("relation labels form a closed set of sixteen") {
  CHECK(all_relation_types().size() == 16);
  for (auto t : all_relation_types()) {
    CHECK(parse_relation_type(to_string(t)) == t);
  }
  CHECK(parse_relation_type("question-answer") == RelationType::kQuestionAnswer);
  CHECK_THROWS_AS(parse_relation_type("agreement"), ValidationError);
}

TEST_CASE("load_meetings reads a well-formed record") {
  std::istringstream in(testing::kFigureMeetingJson + std::string("\n"));
  const auto meetings = read_meetings(in);
  REQUIRE(meetings.size() == 1);
  CHECK(meetings[0].utterances.size() == 4);
  CHECK(meetings[0].relations.size() == 3);
  CHECK(meetings[0].utterances[0].speaker == "PM");
  // Lowercased at load time.
  CHECK(meetings[0].utterances[0].tokens[0] == "let's");
}

TEST_CASE("load_meetings errors") {
  SUBCASE("unknown relation label") {
    std::istringstream in(
        R"({"meeting_id":"x","utterances":[{"speaker":"A","tokens":["hi"]},)"
        R"({"speaker":"B","tokens":["yo"]}],"relations":[[0,"agreement",1]],"summary":null})");
    try {
      read_meetings(in);
      FAIL("expected an error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("unknown relation label") != std::string::npos);
    }
  }
  SUBCASE("out-of-range relation names the meeting") {
    std::istringstream in(
        R"({"meeting_id":"bad-one","utterances":[{"speaker":"A","tokens":["a"]},)"
        R"({"speaker":"A","tokens":["b"]},{"speaker":"A","tokens":["c"]},)"
        R"({"speaker":"A","tokens":["d"]}],"relations":[[0,"continuation",7]],"summary":null})");
    try {
      read_meetings(in);
      FAIL("expected an error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("bad-one") != std::string::npos);
    }
  }
  SUBCASE("malformed JSON reports the line number") {
    std::istringstream in(testing::kFigureMeetingJson + std::string("\n{not json\n"));
    try {
      read_meetings(in);
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).rfind("line 2", 0) == 0);
    }
  }
  SUBCASE("self-relation and empty utterance") {
    std::istringstream self(
        R"({"meeting_id":"s","utterances":[{"speaker":"A","tokens":["a"]}],"relations":[[0,"comment",0]]})");
    CHECK_THROWS_AS(read_meetings(self), ValidationError);
    std::istringstream empty(
        R"({"meeting_id":"e","utterances":[{"speaker":"A","tokens":[]}],"relations":[]})");
    CHECK_THROWS_AS(read_meetings(empty), ValidationError);
  }
}

TEST_CASE("serialization round-trips structurally") {
  std::mt19937_64 rng(11);
  std::vector<Meeting> meetings;
  for (int i = 0; i < 30; ++i) meetings.push_back(random_meeting(rng, 8, 10, i % 2 == 0));
  std::stringstream buf;
  write_meetings(buf, meetings);
  const auto back = read_meetings(buf);
  CHECK(back == meetings);
}

TEST_CASE("build_vocabulary keeps the most frequent words") {
  SUBCASE("fewer words than capacity") {
    const auto v = build_vocabulary({words_meeting({{"a", "b", "c"}})}, 10);
    CHECK(v.size() == 7);
  }
  SUBCASE("frequency cut") {
    // a:3 b:2 c:1 -> room for two words.
    const auto v = build_vocabulary({words_meeting({{"c", "b", "a"}, {"a", "b", "a"}})}, 6);
    CHECK(v.size() == 6);
    CHECK(v.contains("a"));
    CHECK(v.contains("b"));
    CHECK_FALSE(v.contains("c"));
  }
  SUBCASE("ties go to the earlier word") {
    // b:2 d:2, d seen first, one free slot.
    const auto v = build_vocabulary({words_meeting({{"d", "b"}, {"b", "d"}})}, 5);
    CHECK(v.contains("d"));
    CHECK_FALSE(v.contains("b"));
  }
  SUBCASE("summary words count") {
    const auto v = build_vocabulary({words_meeting({{"a"}}, {"z", "z"})}, 5);
    CHECK(v.contains("z"));
  }
  SUBCASE("reserved ids") {
    const auto v = build_vocabulary({words_meeting({{"a"}})}, 10);
    CHECK(v.id("<pad>") == Vocabulary::kPad);
    CHECK(v.id("<unk>") == Vocabulary::kUnk);
    CHECK(v.id("<s>") == Vocabulary::kBos);
    CHECK(v.id("</s>") == Vocabulary::kEos);
    CHECK(v.id("never-seen") == Vocabulary::kUnk);
  }
  CHECK_THROWS_AS(build_vocabulary({}, 10), ValidationError);
  CHECK_THROWS_AS(build_vocabulary({words_meeting({{"a"}})}, 4), ValidationError);
}

TEST_CASE("vocabulary is deterministic and bounded") {
  const auto corpus = make_synthetic_corpus({});
  const auto a = build_vocabulary(corpus, 20);
  const auto b = build_vocabulary(corpus, 20);
  CHECK(a == b);
  CHECK(a.size() <= 20);
  for (int id = 0; id < a.size(); ++id) CHECK(a.id(a.word(id)) == id);
}

TEST_CASE("encode_for_copy") {
  const Vocabulary vocab({"the", "button", "is"});
  SUBCASE("all in vocabulary") {
    const auto enc = encode_for_copy(vocab, words_meeting({{"the", "button"}}));
    CHECK(enc.oov.size() == 0);
    CHECK(enc.ids[0] == std::vector<int>{4, 5});
    CHECK(enc.extended_ids[0] == enc.ids[0]);
  }
  SUBCASE("repeated OOV shares one id") {
    const auto enc = encode_for_copy(vocab, words_meeting({{"zapdrive", "is"}, {"the", "zapdrive"}}));
    REQUIRE(enc.oov.size() == 1);
    CHECK(enc.extended_ids[0][0] == enc.extended_ids[1][1]);
    CHECK(enc.ids[0][0] == Vocabulary::kUnk);
  }
  SUBCASE("two OOVs get consecutive ids from the vocabulary size") {
    const auto enc = encode_for_copy(vocab, words_meeting({{"zapdrive", "is", "moonbeam", "zapdrive"}}));
    REQUIRE(enc.oov.size() == 2);
    CHECK(enc.extended_ids[0] == std::vector<int>{7, 6, 8, 7});
    CHECK(lookup_word(vocab, enc.oov, 7) == "zapdrive");
    CHECK(lookup_word(vocab, enc.oov, 8) == "moonbeam");
  }
}

TEST_CASE("every extended id resolves to exactly one source word") {
  std::mt19937_64 rng(5);
  const auto corpus = make_synthetic_corpus({});
  const auto vocab = build_vocabulary(corpus, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_meeting(rng, 8, 6);
    const auto enc = encode_for_copy(vocab, m);
    std::map<int, std::string> seen;
    for (std::size_t i = 0; i < m.utterances.size(); ++i) {
      for (std::size_t j = 0; j < m.utterances[i].tokens.size(); ++j) {
        const int id = enc.extended_ids[i][j];
        if (id < vocab.size()) continue;
        const auto& w = m.utterances[i].tokens[j];
        CHECK(lookup_word(vocab, enc.oov, id) == w);
        const auto [it, inserted] = seen.emplace(id, w);
        CHECK(it->second == w);
      }
    }
  }
}

TEST_CASE("split manifest") {
  std::istringstream in("# splits\n[train]\nsyn0\nsyn1\n\n[dev]\nsyn2\n[test]\nsyn3\n");
  const auto manifest = parse_split_manifest(in);
  CHECK(manifest.train == std::vector<std::string>{"syn0", "syn1"});
  CHECK(manifest.dev == std::vector<std::string>{"syn2"});
  CHECK(manifest.test == std::vector<std::string>{"syn3"});

  const auto corpus = make_synthetic_corpus({4, 4, 6, 1});
  const auto splits = apply_splits(corpus, manifest);
  CHECK(splits.train.size() == 2);
  CHECK(splits.test[0].id == "syn3");

  std::istringstream bad("[train]\nnope\n");
  CHECK_THROWS_AS(apply_splits(corpus, parse_split_manifest(bad)), ValidationError);
  std::istringstream headless("syn0\n");
  CHECK_THROWS_AS(parse_split_manifest(headless), ParseError);
}
