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
/// ROUGE-1/2/L, corpus evaluation, discourse ablation curves and attention
/// export.
///
/// ROUGE here is the plain token-level definition: no stemming, no stopword
/// removal, each summary scored as a single sequence.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dgsum/corpus.hpp"
#include "dgsum/model.hpp"

namespace dgsum {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// f1 = 2PR/(P+R), or 0 when P+R is 0.
RougeScore make_rouge(double precision, double recall);

/// Clipped n-gram overlap for n in {1, 2}.
RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n);

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference);

struct RougeTriple {
  RougeScore r1;
  RougeScore r2;
  RougeScore rl;
};

RougeTriple score_summary(std::span<const std::string> candidate,
                          std::span<const std::string> reference);

struct MeetingScore {
  std::string meeting_id;
  std::vector<std::string> candidate;
  RougeTriple rouge;
};

struct CorpusScores {
  RougeTriple mean;
  std::vector<MeetingScore> per_meeting;
};

/// Unweighted means of per-meeting scores. Throws ValidationError when a
/// reference is missing or when the candidate count differs.
CorpusScores score_corpus(const std::vector<Meeting>& meetings,
                          const std::vector<std::vector<std::string>>& candidates);

template <typename S>
CorpusScores evaluate_corpus(const Model<S>& model,
                             const std::vector<Meeting>& meetings,
                             const BeamConfig& beam);

struct CurvePoint {
  double fraction = 0.0;
  double rouge_l = 0.0;
};

/// Mean ROUGE-L F1 after keeping each fraction of the discourse relations.
/// Meeting k is thinned with stream derive_seed(seed, "ablation", k).
template <typename S>
std::vector<CurvePoint> discourse_percentage_curve(const Model<S>& model,
                                                   const std::vector<Meeting>& meetings,
                                                   std::span<const double> fractions,
                                                   std::uint64_t seed,
                                                   const BeamConfig& beam);

struct RelationPoint {
  RelationType relation = RelationType::kComment;
  double rouge_l = 0.0;
};

/// One row per relation type: mean ROUGE-L F1 when only that type is kept.
template <typename S>
std::vector<RelationPoint> relation_type_curve(const Model<S>& model,
                                               const std::vector<Meeting>& meetings,
                                               const BeamConfig& beam);

/// "fraction,rouge_l" rows.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);
/// "relation,rouge_l" rows.
void write_relation_csv(std::ostream& out, const std::vector<RelationPoint>& curve);

struct AttentionTrace {
  std::string meeting_id;
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> utterance_attention;  // steps x |U|
  std::vector<std::vector<double>> word_attention;       // steps x words
};

/// Greedy decode of `meeting` with its attention rows.
template <typename S>
AttentionTrace export_attention(const Model<S>& model, const Meeting& meeting,
                                int max_len);

std::string attention_to_json(const AttentionTrace& trace);

}  // namespace dgsum
