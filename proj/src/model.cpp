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

#include "dgsum/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "dgsum/random.hpp"

namespace dgsum {

using ad::Var;

void ModelConfig::validate() const {
  if (hidden_size <= 0 || word_emb_size <= 0 || vocab_size <= 0 ||
      num_speakers <= 0 || beam_size <= 0 || num_gcn_layers < 0) {
    throw ValidationError("model sizes must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ValidationError("dropout must lie in [0, 1)");
  }
}

namespace {

template <typename S>
Var<S> dropout(const Var<S>& x, const ForwardOptions& opts) {
  if (!opts.dropout_active()) return x;
  const double keep = 1.0 - opts.dropout;
  MatrixX<S> mask(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < mask.size(); ++k) {
    mask.data()[k] = uniform01(*opts.rng) < keep ? S(1.0 / keep) : S(0);
  }
  return ad::cmul(x, std::move(mask));
}

template <typename S>
std::pair<Var<S>, Var<S>> lstm_step(const typename BoundParameters<S>::Lstm& p,
                                    const Var<S>& x, const Var<S>& h,
                                    const Var<S>& c, int hidden) {
  const auto z = matmul(p.weight, ad::vcat({x, h})) + p.bias;
  const auto i = sigmoid(ad::rows(z, 0, hidden));
  const auto f = sigmoid(ad::rows(z, hidden, hidden));
  const auto g = ad::tanh(ad::rows(z, 2 * hidden, hidden));
  const auto o = sigmoid(ad::rows(z, 3 * hidden, hidden));
  const auto c_next = cmul(f, c) + cmul(i, g);
  const auto h_next = cmul(o, ad::tanh(c_next));
  return {h_next, c_next};
}

template <typename S>
Var<S> embed(const BoundParameters<S>& params, int id) {
  const auto vocab = params.word_embedding.cols();
  if (id < 0 || id >= vocab) {
    throw ValidationError("token id " + std::to_string(id) +
                          " outside the embedding table");
  }
  return ad::col(params.word_embedding, id);
}

}  // namespace

template <typename S>
ModelParameters<S> init_parameters(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  const int H = config.hidden_size;
  const int E = config.word_emb_size;
  const int V = config.vocab_size;
  const int P = config.num_speakers;
  const int D = config.vertex_size();

  ModelParameters<S> p;
  p.word_embedding.resize(E, V);
  p.encoder_forward.weight.resize(4 * H, E + P + H);
  p.encoder_forward.bias.resize(4 * H, 1);
  p.encoder_backward.weight.resize(4 * H, E + P + H);
  p.encoder_backward.bias.resize(4 * H, 1);
  p.relation_embedding.resize(D, kNumRelationTypes);
  p.global_embedding.resize(D, 1);
  p.graph_layers.resize(config.num_gcn_layers);
  for (auto& layer : p.graph_layers) {
    for (int r = 0; r < kNumEdgeRelations; ++r) {
      layer.weight[r].resize(D, D);
      layer.gate[r].resize(1, D);
    }
  }
  p.init_weight.resize(H, D);
  p.init_bias.resize(H, 1);
  p.decoder.weight.resize(4 * H, E + H);
  p.decoder.bias.resize(4 * H, 1);
  p.word_attention.resize(H, D);
  p.utterance_attention.resize(H, D);
  p.readout_weight.resize(H, H + 2 * D);
  p.readout_bias.resize(H, 1);
  p.output_weight.resize(V, H);
  p.output_bias.resize(V, 1);
  p.gen_context.resize(1, 2 * D);
  p.gen_state.resize(1, H);
  p.gen_input.resize(1, E);
  p.gen_bias.resize(1, 1);

  std::mt19937_64 rng(seed);
  p.for_each([&](const std::string&, Parameter<S>& param) {
    for (Eigen::Index k = 0; k < param.value.size(); ++k) {
      param.value.data()[k] = static_cast<S>(-0.1 + 0.2 * uniform01(rng));
    }
  });
  return p;
}

template <typename S>
void zero_grad(ModelParameters<S>& params) {
  params.for_each([](const std::string&, Parameter<S>& p) { p.grad.setZero(); });
}

namespace {

template <typename S, typename Source, typename MakeVar>
BoundParameters<S> bind_with(Source& params, MakeVar make) {
  BoundParameters<S> bound;
  bound.graph_layers.resize(params.graph_layers.size());
  std::vector<Var<S>> vars;
  params.for_each([&](const std::string&, auto& p) { vars.push_back(make(p)); });
  std::size_t k = 0;
  bound.for_each([&](const std::string&, Var<S>& v) { v = vars[k++]; });
  return bound;
}

}  // namespace

template <typename S>
BoundParameters<S> bind(ad::Tape<S>& tape, ModelParameters<S>& params) {
  return bind_with<S>(params, [&](Parameter<S>& p) {
    if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) {
      p.grad.setZero(p.value.rows(), p.value.cols());
    }
    return tape.parameter(p.value, p.grad);
  });
}

template <typename S>
BoundParameters<S> bind_frozen(ad::Tape<S>& tape, const ModelParameters<S>& params) {
  return bind_with<S>(params,
                      [&](const Parameter<S>& p) { return tape.frozen(p.value); });
}

template <typename S>
Model<S> make_model(const ModelConfig& config, Vocabulary vocab,
                    SpeakerIndex speakers, std::uint64_t seed) {
  Model<S> m;
  m.config = config;
  m.config.vocab_size = vocab.size();
  m.config.num_speakers = speakers.size();
  m.vocab = std::move(vocab);
  m.speakers = std::move(speakers);
  m.params = init_parameters<S>(m.config, seed);
  return m;
}

template <typename S>
int load_word_vectors(Model<S>& model, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  const int E = model.config.word_emb_size;
  std::set<int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> v;
    double x = 0.0;
    while (fields >> x) v.push_back(x);
    if (!fields.eof()) {
      throw ParseError("line " + std::to_string(line_no) + ": non-numeric component");
    }
    if (static_cast<int>(v.size()) != E) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(E) + " components, got " +
                       std::to_string(v.size()));
    }
    if (!model.vocab.contains(word)) continue;
    const int id = model.vocab.id(word);
    for (int k = 0; k < E; ++k) {
      model.params.word_embedding.value(k, id) = static_cast<S>(v[k]);
    }
    seen.insert(id);
  }
  return static_cast<int>(seen.size());
}

template <typename S>
GraphOperator<S> make_graph_operator(const DiscourseGraph& graph) {
  const int n = graph.num_vertices();
  GraphOperator<S> op;
  op.num_vertices = n;
  for (int r = 0; r < kNumEdgeRelations; ++r) {
    std::vector<std::set<int>> in(n);
    for (const auto& e : graph.edges) {
      if (static_cast<int>(e.label) == r) in[e.dst].insert(e.src);
    }
    std::vector<Eigen::Triplet<S>> entries;
    for (int i = 0; i < n; ++i) {
      for (int j : in[i]) {
        entries.emplace_back(j, i, S(1) / static_cast<S>(in[i].size()));
      }
    }
    auto a = std::make_shared<ad::SparseMatrix<S>>(n, n);
    a->setFromTriplets(entries.begin(), entries.end());
    op.adjacency[r] = std::move(a);
  }
  return op;
}

template <typename S>
EncodedUtterance<S> encode_utterance(const BoundParameters<S>& params,
                                     const ModelConfig& config,
                                     std::span<const int> tokens, int speaker,
                                     const ForwardOptions& opts) {
  if (tokens.empty()) throw ValidationError("cannot encode an empty utterance");
  if (speaker < 0 || speaker >= config.num_speakers) {
    throw ValidationError("speaker index " + std::to_string(speaker) +
                          " out of range");
  }
  auto* tape = params.word_embedding.tape();
  const int H = config.hidden_size;
  const auto n = static_cast<int>(tokens.size());

  MatrixX<S> one_hot = MatrixX<S>::Zero(config.num_speakers, 1);
  one_hot(speaker, 0) = S(1);
  const auto speaker_var = tape->constant(std::move(one_hot));

  std::vector<Var<S>> inputs;
  inputs.reserve(n);
  for (int id : tokens) {
    inputs.push_back(ad::vcat({dropout(embed(params, id), opts), speaker_var}));
  }

  const auto zero = tape->constant(MatrixX<S>::Zero(H, 1));
  std::vector<Var<S>> fwd(n), bwd(n);
  Var<S> h = zero, c = zero;
  for (int j = 0; j < n; ++j) {
    std::tie(h, c) = lstm_step<S>(params.encoder_forward, inputs[j], h, c, H);
    fwd[j] = h;
  }
  h = zero;
  c = zero;
  for (int j = n - 1; j >= 0; --j) {
    std::tie(h, c) = lstm_step<S>(params.encoder_backward, inputs[j], h, c, H);
    bwd[j] = h;
  }

  EncodedUtterance<S> out;
  out.word_states = ad::vcat({ad::hcat<S>(fwd), ad::hcat<S>(bwd)});
  out.utterance_vector = ad::vcat({fwd.back(), bwd.front()});
  return out;
}

template <typename S>
Var<S> init_vertex_features(const DiscourseGraph& graph,
                            const Var<S>& utterance_vectors,
                            const BoundParameters<S>& params) {
  const auto d = params.relation_embedding.rows();
  if (utterance_vectors.rows() != d ||
      utterance_vectors.cols() != graph.num_utterances) {
    throw ValidationError("utterance vectors do not match the graph's vertex space");
  }
  std::vector<Var<S>> columns;
  columns.reserve(graph.vertices.size());
  for (const auto& v : graph.vertices) {
    switch (v.kind) {
      case VertexKind::kUtterance:
        columns.push_back(ad::col(utterance_vectors, v.payload));
        break;
      case VertexKind::kRelationInstance:
        columns.push_back(
            ad::col(params.relation_embedding, static_cast<int>(v.relation)));
        break;
      case VertexKind::kGlobal:
        columns.push_back(params.global_embedding);
        break;
    }
  }
  return ad::hcat<S>(columns);
}

template <typename S>
Var<S> gated_rgcn_layer(const GraphOperator<S>& graph, const Var<S>& features,
                        const typename BoundParameters<S>::GraphLayer& layer) {
  if (features.cols() != graph.num_vertices) {
    throw ValidationError("feature matrix does not cover every vertex");
  }
  std::vector<Var<S>> messages;
  for (int r = 0; r < kNumEdgeRelations; ++r) {
    if (graph.adjacency[r]->nonZeros() == 0) continue;
    const auto transformed = matmul(layer.weight[r], features);
    const auto gates = sigmoid(matmul(layer.gate[r], features));
    messages.push_back(
        matmul(ad::scale_columns(transformed, gates), graph.adjacency[r]));
  }
  return relu(ad::sum<S>(messages));
}

template <typename S>
MatrixX<S> gate_values(const MatrixX<S>& features,
                       const typename ModelParameters<S>::GraphLayer& layer) {
  MatrixX<S> g(kNumEdgeRelations, features.cols());
  for (int r = 0; r < kNumEdgeRelations; ++r) {
    const MatrixX<S> z = layer.gate[r].value * features;
    g.row(r) = z.unaryExpr([](S x) { return S(1) / (S(1) + std::exp(-x)); });
  }
  return g;
}

template <typename S>
EncoderOutput<S> encode_meeting(const BoundParameters<S>& params,
                                const ModelConfig& config, const Meeting& meeting,
                                const CopyEncoding& encoding,
                                const SpeakerIndex& speakers,
                                const ForwardOptions& opts) {
  if (params.word_embedding.cols() != config.vocab_size) {
    throw ValidationError("embedding table does not match the vocabulary size");
  }
  std::vector<Var<S>> word_states;
  std::vector<Var<S>> utterance_vectors;
  EncoderOutput<S> out;
  for (std::size_t i = 0; i < meeting.utterances.size(); ++i) {
    const auto& u = meeting.utterances[i];
    auto enc = encode_utterance(params, config, encoding.ids.at(i),
                                speakers.id(u.speaker), opts);
    word_states.push_back(enc.word_states);
    utterance_vectors.push_back(enc.utterance_vector);
    out.source_ids.insert(out.source_ids.end(), encoding.extended_ids[i].begin(),
                          encoding.extended_ids[i].end());
  }
  out.word_states = ad::hcat<S>(word_states);
  out.utterance_vectors = ad::hcat<S>(utterance_vectors);
  out.extended_size = config.vocab_size + encoding.oov.size();

  const auto graph = build_discourse_graph(meeting);
  const auto op = make_graph_operator<S>(graph);
  out.vertex_features =
      init_vertex_features(graph, out.utterance_vectors, params);
  Var<S> h = out.vertex_features;
  out.layer_states.push_back(h);
  for (std::size_t l = 0; l < params.graph_layers.size(); ++l) {
    if (l > 0) h = dropout(h, opts);
    h = gated_rgcn_layer(op, h, params.graph_layers[l]);
    out.layer_states.push_back(h);
  }
  out.graph_states = h;
  out.utterance_states = ad::cols(h, 0, graph.num_utterances);
  out.global_state = ad::col(h, graph.global_vertex());
  return out;
}

template <typename S>
Attention<S> bilinear_attention(const Var<S>& decoder_state, const Var<S>& states,
                                const Var<S>& weight) {
  const auto query = matmul(transpose(decoder_state), weight);  // 1 x d_v
  const auto weights = softmax(matmul(query, states));           // 1 x n
  Attention<S> a;
  a.weights = transpose(weights);
  a.context = matmul(states, a.weights);
  return a;
}

template <typename S>
DecoderState<S> init_decoder(const EncoderOutput<S>& encoded,
                             const BoundParameters<S>& params,
                             const ModelConfig& config) {
  auto* tape = encoded.global_state.tape();
  DecoderState<S> s;
  s.hidden = matmul(params.init_weight, encoded.global_state) + params.init_bias;
  s.cell = tape->constant(MatrixX<S>::Zero(config.hidden_size, 1));
  s.prev_token = Vocabulary::kBos;
  s.step = 0;
  return s;
}

template <typename S>
std::pair<DecoderState<S>, StepDistribution<S>> decode_step(
    const DecoderState<S>& state, const EncoderOutput<S>& encoded,
    const BoundParameters<S>& params, const ModelConfig& config,
    const ForwardOptions& opts) {
  const int input_id =
      state.prev_token >= config.vocab_size ? Vocabulary::kUnk : state.prev_token;
  const auto x = dropout(embed(params, input_id), opts);

  DecoderState<S> next;
  std::tie(next.hidden, next.cell) =
      lstm_step<S>(params.decoder, x, state.hidden, state.cell, config.hidden_size);
  next.step = state.step + 1;
  next.prev_token = state.prev_token;

  StepDistribution<S> d;
  d.word = word_level_attention(next.hidden, encoded, params);
  d.utterance = utterance_level_attention(next.hidden, encoded, params);
  d.context = ad::vcat({d.word.context, d.utterance.context});

  const auto readout =
      matmul(params.readout_weight, ad::vcat({next.hidden, d.context})) + params.readout_bias;
  d.vocab_dist = softmax(matmul(params.output_weight, readout) + params.output_bias);

  const std::array<Var<S>, 4> gen_terms = {
      matmul(params.gen_context, d.context), matmul(params.gen_state, next.hidden),
      matmul(params.gen_input, x), params.gen_bias};
  const auto gen_logit = ad::sum<S>(gen_terms);
  d.p_gen = sigmoid(gen_logit);
  // sigmoid(-z) rather than 1 - sigmoid(z): stays nonzero when the gate saturates.
  const auto p_copy = sigmoid(ad::affine(gen_logit, S(-1), S(0)));

  const auto copy =
      ad::scatter_add(d.word.weights, encoded.source_ids, encoded.extended_size);
  d.final_dist = ad::scale(ad::pad_rows(d.vocab_dist, encoded.extended_size), d.p_gen) +
                 ad::scale(copy, p_copy);
  return {next, d};
}

std::vector<int> target_ids(const Vocabulary& vocab, const CopyEncoding& encoding,
                            const std::vector<std::string>& summary) {
  std::vector<int> ids;
  ids.reserve(summary.size() + 1);
  for (const auto& w : summary) {
    int id = vocab.id(w);
    if (id == Vocabulary::kUnk) {
      const int ext = encoding.oov.find(w);
      if (ext >= 0) id = ext;
    }
    ids.push_back(id);
  }
  ids.push_back(Vocabulary::kEos);
  return ids;
}

template <typename S>
Var<S> sequence_nll(const BoundParameters<S>& params, const ModelConfig& config,
                    const Meeting& meeting, const CopyEncoding& encoding,
                    const SpeakerIndex& speakers, std::span<const int> targets,
                    const ForwardOptions& opts) {
  if (targets.empty()) throw ValidationError("empty target sequence");
  const auto encoded = encode_meeting(params, config, meeting, encoding, speakers, opts);
  auto state = init_decoder(encoded, params, config);
  std::vector<Var<S>> log_probs;
  log_probs.reserve(targets.size());
  for (int y : targets) {
    auto [next, dist] = decode_step(state, encoded, params, config, opts);
    if (y < 0 || y >= dist.final_dist.rows()) {
      throw ValidationError("target id " + std::to_string(y) + " out of range");
    }
    log_probs.push_back(ad::log(ad::entry(dist.final_dist, y)));
    state = next;
    state.prev_token = y;
  }
  return ad::affine(ad::sum<S>(log_probs), S(-1), S(0));
}

namespace {

struct BeamEntry {
  std::vector<int> ids;
  double log_prob = 0.0;
  std::vector<std::vector<double>> word_attention;
  std::vector<std::vector<double>> utterance_attention;
};

template <typename S>
std::vector<double> to_std(const MatrixX<S>& m) {
  std::vector<double> v(static_cast<std::size_t>(m.size()));
  for (Eigen::Index k = 0; k < m.size(); ++k) v[k] = static_cast<double>(m.data()[k]);
  return v;
}

}  // namespace

template <typename S>
Hypothesis beam_search(const Model<S>& model, const Meeting& meeting,
                       const BeamConfig& beam) {
  if (beam.beam_size < 1 || beam.max_len < 1) {
    throw ValidationError("beam size and max length must be positive");
  }
  validate(meeting);
  ad::Tape<S> tape;
  const auto params = bind_frozen(tape, model.params);
  const auto encoding = encode_for_copy(model.vocab, meeting);
  const auto encoded =
      encode_meeting(params, model.config, meeting, encoding, model.speakers);
  const auto init = init_decoder(encoded, params, model.config);
  const std::size_t base = tape.size();

  struct Live {
    BeamEntry entry;
    MatrixX<S> hidden;
    MatrixX<S> cell;
  };
  struct Candidate {
    std::size_t beam = 0;
    int id = 0;
    double log_prob = 0.0;
  };

  std::vector<Live> live = {{BeamEntry{}, init.hidden.value(), init.cell.value()}};
  std::vector<BeamEntry> finished;
  const auto k = static_cast<std::size_t>(beam.beam_size);

  for (int t = 0; t < beam.max_len && !live.empty(); ++t) {
    std::vector<Candidate> candidates;
    std::vector<MatrixX<S>> next_hidden(live.size()), next_cell(live.size());
    std::vector<std::vector<double>> word_att(live.size()), utt_att(live.size());

    for (std::size_t b = 0; b < live.size(); ++b) {
      tape.truncate(base);
      DecoderState<S> st;
      st.hidden = tape.constant(live[b].hidden);
      st.cell = tape.constant(live[b].cell);
      st.prev_token = live[b].entry.ids.empty() ? Vocabulary::kBos
                                                : live[b].entry.ids.back();
      st.step = t;
      const auto [next, dist] = decode_step(st, encoded, params, model.config);
      next_hidden[b] = next.hidden.value();
      next_cell[b] = next.cell.value();
      word_att[b] = to_std<S>(dist.word.weights.value());
      utt_att[b] = to_std<S>(dist.utterance.weights.value());

      const auto& p = dist.final_dist.value();
      std::vector<int> ids;
      ids.reserve(p.rows());
      for (int id = 0; id < p.rows(); ++id) {
        if (id == Vocabulary::kPad || id == Vocabulary::kBos) continue;
        ids.push_back(id);
      }
      const auto top = std::min(k, ids.size());
      std::partial_sort(ids.begin(), ids.begin() + top, ids.end(),
                        [&](int a, int c) {
                          if (p(a, 0) != p(c, 0)) return p(a, 0) > p(c, 0);
                          return a < c;
                        });
      for (std::size_t j = 0; j < top; ++j) {
        candidates.push_back(
            {b, ids[j],
             live[b].entry.log_prob + std::log(static_cast<double>(p(ids[j], 0)))});
      }
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& c) {
                       return a.log_prob > c.log_prob;
                     });
    candidates.resize(std::min(candidates.size(), k));

    std::vector<Live> next_live;
    for (const auto& c : candidates) {
      BeamEntry e = live[c.beam].entry;
      e.ids.push_back(c.id);
      e.log_prob = c.log_prob;
      e.word_attention.push_back(word_att[c.beam]);
      e.utterance_attention.push_back(utt_att[c.beam]);
      if (c.id == Vocabulary::kEos) {
        finished.push_back(std::move(e));
      } else {
        next_live.push_back({std::move(e), next_hidden[c.beam], next_cell[c.beam]});
      }
    }
    live = std::move(next_live);
    if (finished.size() >= k) break;
  }

  std::vector<std::pair<BeamEntry, bool>> pool;
  for (auto& e : finished) pool.emplace_back(std::move(e), true);
  // Hypotheses cut off by max_len compete with finished ones.
  for (auto& l : live) {
    if (static_cast<int>(l.entry.ids.size()) == beam.max_len) {
      pool.emplace_back(std::move(l.entry), false);
    }
  }
  const auto score = [](const BeamEntry& e) {
    return e.log_prob / static_cast<double>(std::max<std::size_t>(1, e.ids.size()));
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i) {
    if (score(pool[i].first) > score(pool[best].first)) best = i;
  }

  Hypothesis h;
  auto& e = pool[best].first;
  h.finished = pool[best].second;
  h.ids = e.ids;
  h.log_prob = e.log_prob;
  h.score = score(e);
  h.word_attention = std::move(e.word_attention);
  h.utterance_attention = std::move(e.utterance_attention);
  for (int id : h.ids) {
    if (id == Vocabulary::kEos) continue;
    h.words.push_back(lookup_word(model.vocab, encoding.oov, id));
  }
  return h;
}

#define DGSUM_INSTANTIATE_MODEL(S)                                              \
  template ModelParameters<S> init_parameters<S>(const ModelConfig&,           \
                                                 std::uint64_t);               \
  template void zero_grad<S>(ModelParameters<S>&);                             \
  template BoundParameters<S> bind<S>(ad::Tape<S>&, ModelParameters<S>&);      \
  template BoundParameters<S> bind_frozen<S>(ad::Tape<S>&,                     \
                                             const ModelParameters<S>&);       \
  template Model<S> make_model<S>(const ModelConfig&, Vocabulary, SpeakerIndex, \
                                  std::uint64_t);                              \
  template int load_word_vectors<S>(Model<S>&, const std::filesystem::path&);  \
  template GraphOperator<S> make_graph_operator<S>(const DiscourseGraph&);     \
  template EncodedUtterance<S> encode_utterance<S>(                            \
      const BoundParameters<S>&, const ModelConfig&, std::span<const int>, int, \
      const ForwardOptions&);                                                  \
  template Var<S> init_vertex_features<S>(const DiscourseGraph&, const Var<S>&, \
                                          const BoundParameters<S>&);          \
  template Var<S> gated_rgcn_layer<S>(                                         \
      const GraphOperator<S>&, const Var<S>&,                                  \
      const typename BoundParameters<S>::GraphLayer&);                         \
  template MatrixX<S> gate_values<S>(                                          \
      const MatrixX<S>&, const typename ModelParameters<S>::GraphLayer&);      \
  template EncoderOutput<S> encode_meeting<S>(                                 \
      const BoundParameters<S>&, const ModelConfig&, const Meeting&,           \
      const CopyEncoding&, const SpeakerIndex&, const ForwardOptions&);        \
  template Attention<S> bilinear_attention<S>(const Var<S>&, const Var<S>&,    \
                                              const Var<S>&);                  \
  template DecoderState<S> init_decoder<S>(                                    \
      const EncoderOutput<S>&, const BoundParameters<S>&, const ModelConfig&); \
  template std::pair<DecoderState<S>, StepDistribution<S>> decode_step<S>(     \
      const DecoderState<S>&, const EncoderOutput<S>&,                         \
      const BoundParameters<S>&, const ModelConfig&, const ForwardOptions&);   \
  template Var<S> sequence_nll<S>(const BoundParameters<S>&, const ModelConfig&, \
                                  const Meeting&, const CopyEncoding&,         \
                                  const SpeakerIndex&, std::span<const int>,   \
                                  const ForwardOptions&);                      \
  template Hypothesis beam_search<S>(const Model<S>&, const Meeting&,          \
                                     const BeamConfig&);

DGSUM_INSTANTIATE_MODEL(float)
DGSUM_INSTANTIATE_MODEL(double)

#undef DGSUM_INSTANTIATE_MODEL

}  // namespace dgsum
