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
/// Maximum-likelihood training with Adam, global-norm clipping and early
/// stopping on dev loss; pseudo-corpus pre-training followed by fine-tuning.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "dgsum/corpus.hpp"
#include "dgsum/model.hpp"

namespace dgsum {

struct TrainConfig {
  double learning_rate = 0.001;
  double max_grad_norm = 2.0;
  double dropout = 0.5;
  int batch_size = 1;  // meetings per update
  int max_epochs = 30;
  int patience = 3;    // epochs without dev improvement before stopping
  std::uint64_t seed = 1;

  void validate() const;
};

/// Teacher-forced negative log-likelihood of the reference summary (plus
/// EOS), summed over target positions, with dropout off.
template <typename S>
S compute_loss(const Model<S>& model, const Meeting& meeting);

/// Adds d(loss)/d(params) for one meeting into the gradient buffers and
/// returns the loss. Throws DivergenceError on a non-finite loss.
template <typename S>
S accumulate_gradients(Model<S>& model, const Meeting& meeting,
                       const ForwardOptions& opts = {});

/// Number of target positions compute_loss sums over.
std::size_t num_targets(const Meeting& meeting);

/// Loss per target token over `meetings`, dropout off. NaN when empty.
template <typename S>
double corpus_loss(const Model<S>& model, const std::vector<Meeting>& meetings);

/// Rescales every gradient by max_norm / norm when the global L2 norm
/// exceeds max_norm. Returns the norm before clipping. Throws
/// DivergenceError on non-finite gradients.
template <typename S>
double clip_gradients(ModelParameters<S>& params, double max_norm);

template <typename S>
class Adam {
 public:
  Adam(const ModelParameters<S>& params, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double epsilon = 1e-8);

  void step(ModelParameters<S>& params);
  long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<MatrixX<S>> m_, v_;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;  // per target token, dropout on
  double dev_loss = 0.0;    // per target token, dropout off
  bool improved = false;
};

/// The log line `epoch <n> train_loss <x> dev_loss <y>`.
std::string format_epoch_line(const EpochStats& stats);

template <typename S>
struct TrainResult {
  Model<S> best;
  int best_epoch = 0;  // 0 when no epoch ran
  std::vector<EpochStats> history;
};

template <typename S>
using EpochCallback = std::function<void(const EpochStats&, const Model<S>&)>;

/// Trains `model` in place order-shuffled per epoch. Selection uses dev loss,
/// or training loss when `dev` is empty. Stops after `patience` epochs
/// without improvement or at max_epochs.
template <typename S>
TrainResult<S> train(Model<S> model, const std::vector<Meeting>& train_set,
                     const std::vector<Meeting>& dev_set, const TrainConfig& config,
                     const EpochCallback<S>& on_epoch = {});

/// Builds vocabulary and speaker index from `train_set` and trains a fresh
/// model initialized from the run seed.
template <typename S>
TrainResult<S> train(const std::vector<Meeting>& train_set,
                     const std::vector<Meeting>& dev_set, ModelConfig model_config,
                     const TrainConfig& config, const EpochCallback<S>& on_epoch = {});

/// Fresh model whose vocabulary and speakers come from `reference_train`.
template <typename S>
Model<S> initial_model(const std::vector<Meeting>& reference_train,
                       ModelConfig model_config, std::uint64_t seed);

template <typename S>
struct PretrainResult {
  TrainResult<S> pretrained;
  TrainResult<S> finetuned;
};

/// Pre-trains on pseudo pairs until dev-pseudo loss stops improving, then
/// fine-tunes the best pre-trained weights on the real corpus. Vocabulary
/// and speakers come from the real training split only.
template <typename S>
PretrainResult<S> pretrain_finetune(const std::vector<Meeting>& pseudo_train,
                                    const std::vector<Meeting>& pseudo_dev,
                                    const std::vector<Meeting>& real_train,
                                    const std::vector<Meeting>& real_dev,
                                    ModelConfig model_config,
                                    const TrainConfig& pretrain_config,
                                    const TrainConfig& finetune_config,
                                    const EpochCallback<S>& on_pretrain_epoch = {},
                                    const EpochCallback<S>& on_finetune_epoch = {});

}  // namespace dgsum
