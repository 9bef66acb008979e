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
/// Discourse-graph summarization network.
///
/// Utterances are read by a speaker-aware BiLSTM; the resulting utterance
/// vectors, together with relation-type and global embeddings, seed a stack
/// of gated relational graph convolutions over the discourse graph. An LSTM
/// decoder initialized from the global vertex attends to pre-graph word
/// states and post-graph utterance states and mixes a vocabulary softmax
/// with a copy distribution.
///
/// Everything is templated on the scalar type; float and double are
/// instantiated.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dgsum/autodiff.hpp"
#include "dgsum/corpus.hpp"
#include "dgsum/graph.hpp"

namespace dgsum {

template <typename S>
using MatrixX = ad::Matrix<S>;
template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

struct ModelConfig {
  int hidden_size = 200;
  int word_emb_size = 300;
  int num_gcn_layers = 2;
  double dropout = 0.5;
  int vocab_size = Vocabulary::kDefaultMaxSize;
  int num_speakers = 1;
  int beam_size = 10;

  /// Vertex feature width: forward and backward encoder states side by side.
  int vertex_size() const { return 2 * hidden_size; }

  /// Throws ValidationError on non-positive sizes or dropout outside [0, 1).
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

template <typename S>
struct Parameter {
  MatrixX<S> value;
  MatrixX<S> grad;

  void resize(Eigen::Index rows, Eigen::Index cols) {
    value.setZero(rows, cols);
    grad.setZero(rows, cols);
  }
};

/// Storage layout shared by the parameters themselves (Slot = Parameter<S>)
/// and by their per-tape bindings (Slot = ad::Var<S>).
template <typename Slot>
struct ParameterSet {
  struct Lstm {
    Slot weight;  // 4H x (input + H), gate rows ordered i, f, g, o
    Slot bias;    // 4H x 1
  };
  struct GraphLayer {
    std::array<Slot, kNumEdgeRelations> weight;  // d_v x d_v per relation
    std::array<Slot, kNumEdgeRelations> gate;    // 1 x d_v per relation
  };

  Slot word_embedding;  // E x V, one column per word
  Lstm encoder_forward;
  Lstm encoder_backward;
  Slot relation_embedding;  // d_v x 16
  Slot global_embedding;    // d_v x 1
  std::vector<GraphLayer> graph_layers;
  Slot init_weight;  // H x d_v
  Slot init_bias;    // H x 1
  Lstm decoder;      // input is the previous-token embedding
  Slot word_attention;       // H x d_v
  Slot utterance_attention;  // H x d_v
  Slot readout_weight;       // H x (H + 2 d_v)
  Slot readout_bias;         // H x 1
  Slot output_weight;        // V x H
  Slot output_bias;          // V x 1
  Slot gen_context;          // 1 x 2 d_v
  Slot gen_state;            // 1 x H
  Slot gen_input;            // 1 x E
  Slot gen_bias;             // 1 x 1

  /// Calls f(name, slot) for every slot in a fixed order.
  template <typename F>
  void for_each(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    visit(*this, f);
  }

 private:
  template <typename Self, typename F>
  static void visit(Self& s, F& f) {
    f("word_embedding", s.word_embedding);
    f("encoder_forward.weight", s.encoder_forward.weight);
    f("encoder_forward.bias", s.encoder_forward.bias);
    f("encoder_backward.weight", s.encoder_backward.weight);
    f("encoder_backward.bias", s.encoder_backward.bias);
    f("relation_embedding", s.relation_embedding);
    f("global_embedding", s.global_embedding);
    for (std::size_t l = 0; l < s.graph_layers.size(); ++l) {
      const auto prefix = "graph." + std::to_string(l) + ".";
      for (int r = 0; r < kNumEdgeRelations; ++r) {
        const auto rel = std::string(to_string(static_cast<EdgeRelation>(r)));
        f(prefix + "weight." + rel, s.graph_layers[l].weight[r]);
        f(prefix + "gate." + rel, s.graph_layers[l].gate[r]);
      }
    }
    f("init_weight", s.init_weight);
    f("init_bias", s.init_bias);
    f("decoder.weight", s.decoder.weight);
    f("decoder.bias", s.decoder.bias);
    f("word_attention", s.word_attention);
    f("utterance_attention", s.utterance_attention);
    f("readout_weight", s.readout_weight);
    f("readout_bias", s.readout_bias);
    f("output_weight", s.output_weight);
    f("output_bias", s.output_bias);
    f("gen_context", s.gen_context);
    f("gen_state", s.gen_state);
    f("gen_input", s.gen_input);
    f("gen_bias", s.gen_bias);
  }
};

template <typename S>
using ModelParameters = ParameterSet<Parameter<S>>;
template <typename S>
using BoundParameters = ParameterSet<ad::Var<S>>;

/// Allocates every tensor for `config` and fills it from U(-0.1, 0.1).
template <typename S>
ModelParameters<S> init_parameters(const ModelConfig& config, std::uint64_t seed);

template <typename S>
void zero_grad(ModelParameters<S>& params);

/// Registers the parameters on `tape`. Tracked bindings accumulate
/// gradients into Parameter::grad on backward().
template <typename S>
BoundParameters<S> bind(ad::Tape<S>& tape, ModelParameters<S>& params);
template <typename S>
BoundParameters<S> bind_frozen(ad::Tape<S>& tape, const ModelParameters<S>& params);

/// Everything a checkpoint carries.
template <typename S>
struct Model {
  ModelConfig config;
  Vocabulary vocab;
  SpeakerIndex speakers;
  ModelParameters<S> params;
};

template <typename S>
Model<S> make_model(const ModelConfig& config, Vocabulary vocab,
                    SpeakerIndex speakers, std::uint64_t seed);

/// Copies `vectors` ("word v1 ... vE" lines) into matching embedding columns.
/// Returns the number of vocabulary words initialized.
template <typename S>
int load_word_vectors(Model<S>& model, const std::filesystem::path& path);

/// Dropout is active only when `training` is set and `rng` is given.
struct ForwardOptions {
  bool training = false;
  double dropout = 0.0;
  std::mt19937_64* rng = nullptr;

  bool dropout_active() const {
    return training && rng != nullptr && dropout > 0.0;
  }
};

/// Row-normalized relation adjacency: entry (j, i) is 1/|N_r(i)| when j is
/// an in-neighbour of i under relation r.
template <typename S>
struct GraphOperator {
  std::array<std::shared_ptr<const ad::SparseMatrix<S>>, kNumEdgeRelations>
      adjacency;
  int num_vertices = 0;
};

template <typename S>
GraphOperator<S> make_graph_operator(const DiscourseGraph& graph);

template <typename S>
struct EncodedUtterance {
  ad::Var<S> word_states;       // d_v x |u|
  ad::Var<S> utterance_vector;  // d_v x 1
};

template <typename S>
struct EncoderOutput {
  ad::Var<S> word_states;        // d_v x (total words), meeting order
  ad::Var<S> utterance_vectors;  // d_v x |U|
  ad::Var<S> vertex_features;    // d_v x |V|, layer 0
  std::vector<ad::Var<S>> layer_states;  // inputs of every graph layer, then the output
  ad::Var<S> graph_states;       // d_v x |V|, after the last layer
  ad::Var<S> utterance_states;   // d_v x |U|, utterance columns of graph_states
  ad::Var<S> global_state;       // d_v x 1
  /// Extended ids of the flattened source words (copy targets).
  std::vector<int> source_ids;
  int extended_size = 0;  // vocab size + number of OOV source words
};

template <typename S>
EncodedUtterance<S> encode_utterance(const BoundParameters<S>& params,
                                     const ModelConfig& config,
                                     std::span<const int> tokens, int speaker,
                                     const ForwardOptions& opts = {});

template <typename S>
ad::Var<S> init_vertex_features(const DiscourseGraph& graph,
                                const ad::Var<S>& utterance_vectors,
                                const BoundParameters<S>& params);

/// One gated relational convolution over the layer's input features.
template <typename S>
ad::Var<S> gated_rgcn_layer(
    const GraphOperator<S>& graph, const ad::Var<S>& features,
    const typename BoundParameters<S>::GraphLayer& layer);

/// Gate activations sigmoid(W_{r,g} h_j) for every relation, |R| x |V|.
template <typename S>
MatrixX<S> gate_values(const MatrixX<S>& features,
                       const typename ModelParameters<S>::GraphLayer& layer);

template <typename S>
EncoderOutput<S> encode_meeting(const BoundParameters<S>& params,
                                const ModelConfig& config, const Meeting& meeting,
                                const CopyEncoding& encoding,
                                const SpeakerIndex& speakers,
                                const ForwardOptions& opts = {});

template <typename S>
struct Attention {
  ad::Var<S> weights;  // n x 1
  ad::Var<S> context;  // d_v x 1
};

/// Bilinear scores s^T W h_k over the columns of `states`, softmax-normalized.
template <typename S>
Attention<S> bilinear_attention(const ad::Var<S>& decoder_state,
                                const ad::Var<S>& states, const ad::Var<S>& weight);

template <typename S>
Attention<S> word_level_attention(const ad::Var<S>& decoder_state,
                                  const EncoderOutput<S>& encoded,
                                  const BoundParameters<S>& params) {
  return bilinear_attention(decoder_state, encoded.word_states,
                            params.word_attention);
}

template <typename S>
Attention<S> utterance_level_attention(const ad::Var<S>& decoder_state,
                                       const EncoderOutput<S>& encoded,
                                       const BoundParameters<S>& params) {
  return bilinear_attention(decoder_state, encoded.utterance_states,
                            params.utterance_attention);
}

template <typename S>
struct DecoderState {
  ad::Var<S> hidden;  // s_t, H x 1
  ad::Var<S> cell;    // H x 1
  int prev_token = Vocabulary::kBos;
  int step = 0;
};

template <typename S>
struct StepDistribution {
  Attention<S> word;
  Attention<S> utterance;
  ad::Var<S> context;     // [word context; utterance context]
  ad::Var<S> p_gen;       // 1 x 1
  ad::Var<S> vocab_dist;  // V x 1
  ad::Var<S> final_dist;  // extended_size x 1
};

/// s_0 = W global_state + b; cell starts at zero.
template <typename S>
DecoderState<S> init_decoder(const EncoderOutput<S>& encoded,
                             const BoundParameters<S>& params,
                             const ModelConfig& config);

template <typename S>
std::pair<DecoderState<S>, StepDistribution<S>> decode_step(
    const DecoderState<S>& state, const EncoderOutput<S>& encoded,
    const BoundParameters<S>& params, const ModelConfig& config,
    const ForwardOptions& opts = {});

/// Teacher-forced target ids: summary words, then EOS. Words outside the
/// vocabulary take their copy id when they occur in the source, else UNK.
std::vector<int> target_ids(const Vocabulary& vocab, const CopyEncoding& encoding,
                            const std::vector<std::string>& summary);

/// Sum over target positions of -log p(y_t | y_<t, meeting), as a 1x1 Var.
template <typename S>
ad::Var<S> sequence_nll(const BoundParameters<S>& params, const ModelConfig& config,
                        const Meeting& meeting, const CopyEncoding& encoding,
                        const SpeakerIndex& speakers, std::span<const int> targets,
                        const ForwardOptions& opts = {});

struct BeamConfig {
  int beam_size = 10;
  int max_len = 100;
};

struct Hypothesis {
  std::vector<int> ids;  // generated ids including a final EOS when reached
  std::vector<std::string> words;  // without EOS, copy ids resolved
  double log_prob = 0.0;
  double score = 0.0;  // log_prob / number of generated ids
  bool finished = false;
  std::vector<std::vector<double>> word_attention;       // per step
  std::vector<std::vector<double>> utterance_attention;  // per step
};

/// Length-normalized beam search. beam_size 1 is greedy argmax decoding.
template <typename S>
Hypothesis beam_search(const Model<S>& model, const Meeting& meeting,
                       const BeamConfig& beam);

}  // namespace dgsum
