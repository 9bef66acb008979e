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

#include <algorithm>
#include <random>
#include <sstream>

#include "dgsum/eval.hpp"
#include "dgsum/synthetic.hpp"
#include "fixtures.hpp"

using namespace dgsum;

namespace {

using Tokens = std::vector<std::string>;

Tokens words(const std::string& text) {
  std::istringstream in(text);
  Tokens out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Exponential-time LCS over all subsequences of the shorter input.
std::size_t brute_lcs(const Tokens& a, const Tokens& b) {
  const Tokens& s = a.size() <= b.size() ? a : b;
  const Tokens& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (unsigned mask = 0; mask < (1u << s.size()); ++mask) {
    Tokens sub;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(s[i]);
    }
    std::size_t j = 0;
    for (const auto& w : t) {
      if (j < sub.size() && sub[j] == w) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

}  // namespace

TEST_CASE("rouge hand checks") {
  const auto cand = words("the cat sat");
  const auto ref = words("the cat ran");
  const auto r1 = rouge_n(cand, ref, 1);
  CHECK(std::abs(r1.precision - 2.0 / 3.0) < 1e-9);
  CHECK(std::abs(r1.recall - 2.0 / 3.0) < 1e-9);
  CHECK(std::abs(r1.f1 - 2.0 / 3.0) < 1e-9);
  CHECK(std::abs(rouge_n(cand, ref, 2).f1 - 0.5) < 1e-9);

  const auto rl = rouge_l(words("a b c d"), words("a c b d"));
  CHECK(lcs_length(words("a b c d"), words("a c b d")) == 3);
  CHECK(std::abs(rl.precision - 0.75) < 1e-9);
  CHECK(std::abs(rl.recall - 0.75) < 1e-9);

  const auto same = words("the team chose yellow");
  for (const auto& s : {rouge_n(same, same, 1), rouge_n(same, same, 2), rouge_l(same, same)}) {
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
  const auto other = words("nothing in common");
  for (const auto& s : {rouge_n(same, other, 1), rouge_n(same, other, 2), rouge_l(same, other)}) {
    CHECK(s.f1 == 0.0);
    CHECK(s.precision == 0.0);
  }
  CHECK(rouge_l({}, same).f1 == 0.0);
  CHECK(rouge_n({}, same, 1).f1 == 0.0);
  CHECK(rouge_n(words("one"), words("one"), 2).f1 == 0.0);
  CHECK_THROWS(rouge_n(same, same, 3));
}

TEST_CASE("clipped counts") {
  // "the" appears 3 times in the candidate but once in the reference.
  const auto s = rouge_n(words("the the the"), words("the cat"), 1);
  CHECK(s.precision == doctest::Approx(1.0 / 3.0));
  CHECK(s.recall == doctest::Approx(0.5));
}

TEST_CASE("rouge bounds and LCS against brute force") {
  std::mt19937_64 rng(5);
  const Tokens pool = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    Tokens c, r;
    for (std::size_t i = rng() % 8; i > 0; --i) c.push_back(pool[rng() % 4]);
    for (std::size_t i = rng() % 8; i > 0; --i) r.push_back(pool[rng() % 4]);
    CHECK(lcs_length(c, r) == brute_lcs(c, r));
    CHECK(lcs_length(c, r) <= std::min(c.size(), r.size()));
    for (const auto& s : {rouge_n(c, r, 1), rouge_n(c, r, 2), rouge_l(c, r)}) {
      CHECK(s.f1 >= 0.0);
      CHECK(s.f1 <= std::max(s.precision, s.recall) + 1e-15);
      CHECK(s.precision <= 1.0);
      CHECK(s.recall <= 1.0);
    }
  }
}

TEST_CASE("score_corpus") {
  auto corpus = make_synthetic_corpus({3, 4, 6, 2});
  std::vector<Tokens> refs;
  for (const auto& m : corpus) refs.push_back(*m.summary);
  const auto perfect = score_corpus(corpus, refs);
  CHECK(perfect.mean.r1.f1 == 1.0);
  CHECK(perfect.mean.r2.f1 == 1.0);
  CHECK(perfect.mean.rl.f1 == 1.0);

  std::vector<Tokens> cands = {words("the team"), words("a red case"), words("nothing")};
  const auto s = score_corpus(corpus, cands);
  double mean = 0.0;
  for (int i = 0; i < 3; ++i) mean += rouge_l(cands[i], refs[i]).f1 / 3.0;
  CHECK(s.mean.rl.f1 == doctest::Approx(mean).epsilon(1e-12));

  const auto one = score_corpus({corpus[1]}, {cands[1]});
  CHECK(one.mean.r1.f1 == rouge_n(cands[1], refs[1], 1).f1);

  std::reverse(corpus.begin(), corpus.end());
  std::reverse(cands.begin(), cands.end());
  CHECK(score_corpus(corpus, cands).mean.rl.f1 == doctest::Approx(s.mean.rl.f1).epsilon(1e-15));

  corpus[0].summary.reset();
  CHECK_THROWS_AS(score_corpus(corpus, cands), ValidationError);
  CHECK_THROWS_AS(score_corpus(corpus, {}), ValidationError);
}

TEST_CASE("ablation curves") {
  const auto model = testing::tiny_model<double>(4);
  auto meetings = make_synthetic_corpus({3, 4, 8, 9});
  const BeamConfig beam{2, 6};
  const std::vector<double> fractions = {0.0, 0.5, 1.0};
  const auto curve = discourse_percentage_curve(model, meetings, fractions, 7, beam);
  REQUIRE(curve.size() == 3);
  CHECK(curve[2].rouge_l == evaluate_corpus(model, meetings, beam).mean.rl.f1);
  CHECK(curve[0].rouge_l == discourse_percentage_curve(model, meetings, fractions, 7, beam)[0].rouge_l);
  std::ostringstream csv;
  write_curve_csv(csv, curve);
  const auto text = csv.str();
  CHECK(text.rfind("fraction,rouge_l\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  const std::vector<double> bad = {1.5};
  CHECK_THROWS(discourse_percentage_curve(model, meetings, bad, 7, beam));

  // Contrast-only corpus: every other row equals the relation-free score.
  for (auto& m : meetings) m = filter_relation_type(m, RelationType::kContrast);
  const auto rows = relation_type_curve(model, meetings, beam);
  REQUIRE(rows.size() == 16);
  std::vector<Meeting> bare = meetings;
  for (auto& m : bare) m.relations.clear();
  const double baseline = evaluate_corpus(model, bare, beam).mean.rl.f1;
  for (const auto& row : rows) {
    if (row.relation != RelationType::kContrast) CHECK(row.rouge_l == baseline);
  }
  std::ostringstream rel_csv;
  write_relation_csv(rel_csv, rows);
  CHECK(rel_csv.str().rfind("relation,rouge_l\ncomment,", 0) == 0);
}

TEST_CASE("attention export") {
  const auto model = testing::tiny_model<double>(6);
  const auto m = testing::figure_meeting();
  const auto trace = export_attention(model, m, 7);
  CHECK(trace.utterance_attention.size() == trace.tokens.size());
  CHECK(trace.word_attention.size() == trace.tokens.size());
  for (const auto& row : trace.utterance_attention) {
    CHECK(row.size() == 4);
    double total = 0.0;
    for (double x : row) total += x;
    CHECK(std::abs(total - 1.0) < 1e-6);
  }
  for (const auto& row : trace.word_attention) CHECK(row.size() == m.num_words());
  const auto json = attention_to_json(trace);
  CHECK(json.find("\"utterance_attention\"") != std::string::npos);
}
