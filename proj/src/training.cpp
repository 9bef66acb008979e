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

#include "dgsum/training.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "dgsum/random.hpp"

namespace dgsum {
namespace {

const std::vector<std::string>& reference_of(const Meeting& meeting) {
  if (!meeting.summary || meeting.summary->empty()) {
    throw ValidationError("meeting " + meeting.id + " has no reference summary");
  }
  return *meeting.summary;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !(max_grad_norm > 0.0)) {
    throw ValidationError("learning rate and gradient norm bound must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ValidationError("dropout must lie in [0, 1)");
  }
  if (batch_size < 1 || max_epochs < 0 || patience < 1) {
    throw ValidationError("batch_size and patience must be >= 1, max_epochs >= 0");
  }
}

std::size_t num_targets(const Meeting& meeting) {
  return reference_of(meeting).size() + 1;
}

template <typename S>
S compute_loss(const Model<S>& model, const Meeting& meeting) {
  const auto& summary = reference_of(meeting);
  ad::Tape<S> tape;
  const auto params = bind_frozen(tape, model.params);
  const auto encoding = encode_for_copy(model.vocab, meeting);
  const auto targets = target_ids(model.vocab, encoding, summary);
  return sequence_nll(params, model.config, meeting, encoding, model.speakers,
                      targets)
      .scalar();
}

template <typename S>
S accumulate_gradients(Model<S>& model, const Meeting& meeting,
                       const ForwardOptions& opts) {
  const auto& summary = reference_of(meeting);
  ad::Tape<S> tape;
  const auto params = bind(tape, model.params);
  const auto encoding = encode_for_copy(model.vocab, meeting);
  const auto targets = target_ids(model.vocab, encoding, summary);
  const auto loss = sequence_nll(params, model.config, meeting, encoding,
                                 model.speakers, targets, opts);
  if (!std::isfinite(static_cast<double>(loss.scalar()))) {
    throw DivergenceError("non-finite loss on meeting " + meeting.id);
  }
  tape.backward(loss);
  return loss.scalar();
}

template <typename S>
double corpus_loss(const Model<S>& model, const std::vector<Meeting>& meetings) {
  if (meetings.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& m : meetings) {
    total += static_cast<double>(compute_loss(model, m));
    tokens += num_targets(m);
  }
  return total / static_cast<double>(tokens);
}

template <typename S>
double clip_gradients(ModelParameters<S>& params, double max_norm) {
  double sq = 0.0;
  params.for_each([&](const std::string& name, const Parameter<S>& p) {
    if (!p.grad.allFinite()) {
      throw DivergenceError("non-finite gradient in " + name);
    }
    sq += static_cast<double>(p.grad.squaredNorm());
  });
  const double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw DivergenceError("gradient norm overflow");
  if (norm > max_norm) {
    const auto factor = static_cast<S>(max_norm / norm);
    params.for_each([&](const std::string&, Parameter<S>& p) { p.grad *= factor; });
  }
  return norm;
}

template <typename S>
Adam<S>::Adam(const ModelParameters<S>& params, double learning_rate, double beta1,
              double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  params.for_each([&](const std::string&, const Parameter<S>& p) {
    m_.push_back(MatrixX<S>::Zero(p.value.rows(), p.value.cols()));
    v_.push_back(MatrixX<S>::Zero(p.value.rows(), p.value.cols()));
  });
}

template <typename S>
void Adam<S>::step(ModelParameters<S>& params) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const S step_size = static_cast<S>(lr_ * std::sqrt(c2) / c1);
  const S b1 = static_cast<S>(beta1_), b2 = static_cast<S>(beta2_);
  const S eps = static_cast<S>(eps_ * std::sqrt(c2));
  std::size_t k = 0;
  params.for_each([&](const std::string&, Parameter<S>& p) {
    auto& m = m_[k];
    auto& v = v_[k];
    ++k;
    m = b1 * m + (S(1) - b1) * p.grad;
    v = b2 * v + (S(1) - b2) * p.grad.cwiseAbs2();
    p.value.array() -= step_size * m.array() / (v.array().sqrt() + eps);
  });
}

std::string format_epoch_line(const EpochStats& stats) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "epoch %d train_loss %.6f dev_loss %.6f",
                stats.epoch, stats.train_loss, stats.dev_loss);
  return buf;
}

template <typename S>
TrainResult<S> train(Model<S> model, const std::vector<Meeting>& train_set,
                     const std::vector<Meeting>& dev_set, const TrainConfig& config,
                     const EpochCallback<S>& on_epoch) {
  config.validate();
  if (train_set.empty()) throw ValidationError("training split is empty");
  for (const auto& m : train_set) reference_of(m);
  for (const auto& m : dev_set) reference_of(m);

  model.config.dropout = config.dropout;
  std::mt19937_64 shuffle_rng(derive_seed(config.seed, "shuffle"));
  std::mt19937_64 dropout_rng(derive_seed(config.seed, "dropout"));
  ForwardOptions opts{true, config.dropout, &dropout_rng};
  Adam<S> adam(model.params, config.learning_rate);

  TrainResult<S> result;
  result.best = model;
  double best_loss = std::numeric_limits<double>::infinity();
  int stale = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
    }
    double total = 0.0;
    std::size_t tokens = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const auto stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      zero_grad(model.params);
      for (auto i = start; i < stop; ++i) {
        const auto& m = train_set[order[i]];
        total += static_cast<double>(accumulate_gradients(model, m, opts));
        tokens += num_targets(m);
      }
      if (stop - start > 1) {
        const auto inv = static_cast<S>(1.0 / static_cast<double>(stop - start));
        model.params.for_each([&](const std::string&, Parameter<S>& p) { p.grad *= inv; });
      }
      clip_gradients(model.params, config.max_grad_norm);
      adam.step(model.params);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = total / static_cast<double>(tokens);
    stats.dev_loss = corpus_loss(model, dev_set);
    const double selection = dev_set.empty() ? stats.train_loss : stats.dev_loss;
    if (!std::isfinite(selection)) {
      throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch));
    }
    stats.improved = selection < best_loss;
    if (stats.improved) {
      best_loss = selection;
      result.best = model;
      result.best_epoch = epoch;
      stale = 0;
    } else {
      ++stale;
    }
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats, model);
    if (stale >= config.patience) break;
  }
  zero_grad(result.best.params);
  return result;
}

template <typename S>
Model<S> initial_model(const std::vector<Meeting>& reference_train,
                       ModelConfig model_config, std::uint64_t seed) {
  if (reference_train.empty()) throw ValidationError("training split is empty");
  auto vocab = build_vocabulary(reference_train, model_config.vocab_size);
  auto speakers = build_speaker_index(reference_train);
  return make_model<S>(model_config, std::move(vocab), std::move(speakers),
                       derive_seed(seed, "init"));
}

template <typename S>
TrainResult<S> train(const std::vector<Meeting>& train_set,
                     const std::vector<Meeting>& dev_set, ModelConfig model_config,
                     const TrainConfig& config, const EpochCallback<S>& on_epoch) {
  model_config.dropout = config.dropout;
  return train(initial_model<S>(train_set, model_config, config.seed), train_set,
               dev_set, config, on_epoch);
}

template <typename S>
PretrainResult<S> pretrain_finetune(const std::vector<Meeting>& pseudo_train,
                                    const std::vector<Meeting>& pseudo_dev,
                                    const std::vector<Meeting>& real_train,
                                    const std::vector<Meeting>& real_dev,
                                    ModelConfig model_config,
                                    const TrainConfig& pretrain_config,
                                    const TrainConfig& finetune_config,
                                    const EpochCallback<S>& on_pretrain_epoch,
                                    const EpochCallback<S>& on_finetune_epoch) {
  if (pseudo_train.empty()) throw ValidationError("pseudo corpus is empty");
  model_config.dropout = pretrain_config.dropout;
  auto model = initial_model<S>(real_train, model_config, pretrain_config.seed);
  PretrainResult<S> out;
  out.pretrained = train(std::move(model), pseudo_train, pseudo_dev, pretrain_config,
                         on_pretrain_epoch);
  out.finetuned = train(out.pretrained.best, real_train, real_dev, finetune_config,
                        on_finetune_epoch);
  return out;
}

#define DGSUM_INSTANTIATE_TRAINING(S)                                              \
  template S compute_loss<S>(const Model<S>&, const Meeting&);                     \
  template S accumulate_gradients<S>(Model<S>&, const Meeting&,                    \
                                     const ForwardOptions&);                       \
  template double corpus_loss<S>(const Model<S>&, const std::vector<Meeting>&);    \
  template double clip_gradients<S>(ModelParameters<S>&, double);                  \
  template class Adam<S>;                                                          \
  template TrainResult<S> train<S>(Model<S>, const std::vector<Meeting>&,          \
                                   const std::vector<Meeting>&, const TrainConfig&, \
                                   const EpochCallback<S>&);                       \
  template TrainResult<S> train<S>(const std::vector<Meeting>&,                    \
                                   const std::vector<Meeting>&, ModelConfig,       \
                                   const TrainConfig&, const EpochCallback<S>&);   \
  template Model<S> initial_model<S>(const std::vector<Meeting>&, ModelConfig,     \
                                     std::uint64_t);                               \
  template PretrainResult<S> pretrain_finetune<S>(                                 \
      const std::vector<Meeting>&, const std::vector<Meeting>&,                    \
      const std::vector<Meeting>&, const std::vector<Meeting>&, ModelConfig,       \
      const TrainConfig&, const TrainConfig&, const EpochCallback<S>&,             \
      const EpochCallback<S>&);

DGSUM_INSTANTIATE_TRAINING(float)
DGSUM_INSTANTIATE_TRAINING(double)

#undef DGSUM_INSTANTIATE_TRAINING

}  // namespace dgsum
