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

#include "dgsum/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include <json.hpp>

#include "dgsum/graph.hpp"
#include "dgsum/random.hpp"

namespace dgsum {
namespace {

std::map<std::vector<std::string>, int> ngram_counts(
    std::span<const std::string> tokens, int n) {
  std::map<std::vector<std::string>, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

const std::vector<std::string>& reference_of(const Meeting& m) {
  if (!m.summary) {
    throw ValidationError("meeting " + m.id + " has no reference summary");
  }
  return *m.summary;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

RougeScore make_rouge(double precision, double recall) {
  RougeScore s{precision, recall, 0.0};
  if (precision + recall > 0.0) {
    s.f1 = 2.0 * precision * recall / (precision + recall);
  }
  return s;
}

RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("rouge_n supports n = 1, 2");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  int cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [g, c] : cand) cand_total += c;
  for (const auto& [g, c] : ref) {
    ref_total += c;
    const auto it = cand.find(g);
    if (it != cand.end()) overlap += std::min(c, it->second);
  }
  if (cand_total == 0 || ref_total == 0) return {};
  return make_rouge(static_cast<double>(overlap) / cand_total,
                    static_cast<double>(overlap) / ref_total);
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return {};
  const auto l = static_cast<double>(lcs_length(candidate, reference));
  return make_rouge(l / static_cast<double>(candidate.size()),
                    l / static_cast<double>(reference.size()));
}

RougeTriple score_summary(std::span<const std::string> candidate,
                          std::span<const std::string> reference) {
  return {rouge_n(candidate, reference, 1), rouge_n(candidate, reference, 2),
          rouge_l(candidate, reference)};
}

CorpusScores score_corpus(const std::vector<Meeting>& meetings,
                          const std::vector<std::vector<std::string>>& candidates) {
  if (meetings.size() != candidates.size()) {
    throw ValidationError("candidate count does not match meeting count");
  }
  CorpusScores out;
  if (meetings.empty()) return out;
  const auto add = [](RougeScore& acc, const RougeScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (std::size_t i = 0; i < meetings.size(); ++i) {
    MeetingScore ms;
    ms.meeting_id = meetings[i].id;
    ms.candidate = candidates[i];
    ms.rouge = score_summary(candidates[i], reference_of(meetings[i]));
    add(out.mean.r1, ms.rouge.r1);
    add(out.mean.r2, ms.rouge.r2);
    add(out.mean.rl, ms.rouge.rl);
    out.per_meeting.push_back(std::move(ms));
  }
  const double n = static_cast<double>(meetings.size());
  for (auto* s : {&out.mean.r1, &out.mean.r2, &out.mean.rl}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  return out;
}

template <typename S>
CorpusScores evaluate_corpus(const Model<S>& model,
                             const std::vector<Meeting>& meetings,
                             const BeamConfig& beam) {
  for (const auto& m : meetings) reference_of(m);
  std::vector<std::vector<std::string>> candidates;
  candidates.reserve(meetings.size());
  for (const auto& m : meetings) {
    candidates.push_back(beam_search(model, m, beam).words);
  }
  return score_corpus(meetings, candidates);
}

template <typename S>
std::vector<CurvePoint> discourse_percentage_curve(const Model<S>& model,
                                                   const std::vector<Meeting>& meetings,
                                                   std::span<const double> fractions,
                                                   std::uint64_t seed,
                                                   const BeamConfig& beam) {
  std::vector<CurvePoint> curve;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::invalid_argument("fractions must lie in [0, 1]");
    }
    std::vector<Meeting> thinned;
    thinned.reserve(meetings.size());
    for (std::size_t k = 0; k < meetings.size(); ++k) {
      thinned.push_back(
          drop_relations(meetings[k], f, derive_seed(seed, "ablation", k)));
    }
    curve.push_back({f, evaluate_corpus(model, thinned, beam).mean.rl.f1});
  }
  return curve;
}

template <typename S>
std::vector<RelationPoint> relation_type_curve(const Model<S>& model,
                                               const std::vector<Meeting>& meetings,
                                               const BeamConfig& beam) {
  std::vector<RelationPoint> out;
  for (auto type : all_relation_types()) {
    std::vector<Meeting> filtered;
    filtered.reserve(meetings.size());
    for (const auto& m : meetings) filtered.push_back(filter_relation_type(m, type));
    out.push_back({type, evaluate_corpus(model, filtered, beam).mean.rl.f1});
  }
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "fraction,rouge_l\n";
  for (const auto& p : curve) {
    out << format_real(p.fraction) << ',' << format_real(p.rouge_l) << '\n';
  }
}

void write_relation_csv(std::ostream& out, const std::vector<RelationPoint>& curve) {
  out << "relation,rouge_l\n";
  for (const auto& p : curve) {
    out << to_string(p.relation) << ',' << format_real(p.rouge_l) << '\n';
  }
}

template <typename S>
AttentionTrace export_attention(const Model<S>& model, const Meeting& meeting,
                                int max_len) {
  const auto h = beam_search(model, meeting, BeamConfig{1, max_len});
  const auto encoding = encode_for_copy(model.vocab, meeting);
  AttentionTrace trace;
  trace.meeting_id = meeting.id;
  for (int id : h.ids) trace.tokens.push_back(lookup_word(model.vocab, encoding.oov, id));
  trace.utterance_attention = h.utterance_attention;
  trace.word_attention = h.word_attention;
  return trace;
}

std::string attention_to_json(const AttentionTrace& trace) {
  nlohmann::json j;
  j["meeting_id"] = trace.meeting_id;
  j["tokens"] = trace.tokens;
  j["utterance_attention"] = trace.utterance_attention;
  j["word_attention"] = trace.word_attention;
  return j.dump();
}

#define DGSUM_INSTANTIATE_EVAL(S)                                                  \
  template CorpusScores evaluate_corpus<S>(const Model<S>&,                        \
                                           const std::vector<Meeting>&,            \
                                           const BeamConfig&);                     \
  template std::vector<CurvePoint> discourse_percentage_curve<S>(                  \
      const Model<S>&, const std::vector<Meeting>&, std::span<const double>,       \
      std::uint64_t, const BeamConfig&);                                           \
  template std::vector<RelationPoint> relation_type_curve<S>(                      \
      const Model<S>&, const std::vector<Meeting>&, const BeamConfig&);            \
  template AttentionTrace export_attention<S>(const Model<S>&, const Meeting&, int);

DGSUM_INSTANTIATE_EVAL(float)
DGSUM_INSTANTIATE_EVAL(double)

#undef DGSUM_INSTANTIATE_EVAL

}  // namespace dgsum
