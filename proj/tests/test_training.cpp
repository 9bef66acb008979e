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
#include <cmath>
#include <limits>

#include "dgsum/random.hpp"
#include "dgsum/synthetic.hpp"
#include "dgsum/training.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dgsum;

namespace {

double global_norm(const ModelParameters<double>& p) {
  double sq = 0.0;
  p.for_each([&](const std::string&, const Parameter<double>& x) { sq += x.grad.squaredNorm(); });
  return std::sqrt(sq);
}

void fill_grads(ModelParameters<double>& p, double value) {
  p.for_each([&](const std::string&, Parameter<double>& x) { x.grad.setConstant(value); });
}

std::size_t num_entries(const ModelParameters<double>& p) {
  std::size_t n = 0;
  p.for_each([&](const std::string&, const Parameter<double>& x) { n += x.value.size(); });
  return n;
}

TrainConfig quick_config(int epochs) {
  TrainConfig c;
  c.max_epochs = epochs;
  c.patience = std::max(1, epochs);
  c.dropout = 0.0;
  c.learning_rate = 0.01;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.patience = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = TrainConfig{};
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("compute_loss needs a reference") {
  const auto model = testing::tiny_model<double>(1);
  auto m = testing::gradient_meeting();
  m.summary.reset();
  CHECK_THROWS_AS(compute_loss(model, m), ValidationError);
  m.summary = std::vector<std::string>{};
  CHECK_THROWS_AS(compute_loss(model, m), ValidationError);
}

TEST_CASE("gradients match central differences on the tiny model") {
  auto model = testing::tiny_model<double>(2);
  oracle::widen(model.params, 5.0);
  const auto meeting = testing::gradient_meeting();
  const auto errors = oracle::gradient_check(
      model.params, [&] { accumulate_gradients(model, meeting); },
      [&] { return compute_loss(model, meeting); });
  for (const auto& e : errors) {
    INFO(e.name);
    CHECK(e.relative_error < 1e-4);
  }
}

TEST_CASE("clip_gradients") {
  auto model = testing::tiny_model<double>(3);
  const double n = static_cast<double>(num_entries(model.params));
  SUBCASE("norm 1 is untouched") {
    fill_grads(model.params, 1.0 / std::sqrt(n));
    CHECK(clip_gradients(model.params, 2.0) == doctest::Approx(1.0));
    CHECK(global_norm(model.params) == doctest::Approx(1.0));
  }
  SUBCASE("norm 4 is halved") {
    fill_grads(model.params, 4.0 / std::sqrt(n));
    CHECK(clip_gradients(model.params, 2.0) == doctest::Approx(4.0));
    CHECK(std::abs(global_norm(model.params) - 2.0) < 1e-6);
  }
  SUBCASE("NaN signals divergence") {
    fill_grads(model.params, 0.0);
    model.params.gen_bias.grad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(clip_gradients(model.params, 2.0), DivergenceError);
  }
}

TEST_CASE("Adam with zero gradients leaves parameters unchanged") {
  auto model = testing::tiny_model<double>(4);
  const auto before = model.params;
  Adam<double> adam(model.params, 0.001);
  zero_grad(model.params);
  adam.step(model.params);
  adam.step(model.params);
  bool same = true;
  std::vector<const Parameter<double>*> a;
  before.for_each([&](const std::string&, const Parameter<double>& p) { a.push_back(&p); });
  std::size_t k = 0;
  model.params.for_each([&](const std::string&, const Parameter<double>& p) {
    same = same && p.value == a[k++]->value;
  });
  CHECK(same);
  CHECK(adam.steps() == 2);
}

TEST_CASE("first Adam step moves each entry by the learning rate") {
  auto model = testing::tiny_model<double>(5);
  zero_grad(model.params);
  model.params.gen_bias.grad(0, 0) = 0.3;
  model.params.output_bias.grad(2, 0) = -7.0;
  const double g0 = model.params.gen_bias.value(0, 0);
  const double o0 = model.params.output_bias.value(2, 0);
  Adam<double> adam(model.params, 0.01);
  adam.step(model.params);
  CHECK(model.params.gen_bias.value(0, 0) == doctest::Approx(g0 - 0.01).epsilon(1e-6));
  CHECK(model.params.output_bias.value(2, 0) == doctest::Approx(o0 + 0.01).epsilon(1e-6));
}

TEST_CASE("loss is finite for random initializations") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = testing::tiny_model<double>(derive_seed(1, "finite", trial));
    CHECK(std::isfinite(compute_loss(model, random_meeting(rng, 8, 8))));
  }
}

TEST_CASE("training is deterministic under a fixed seed") {
  const auto corpus = make_synthetic_corpus({4, 4, 6, 3});
  auto cfg = quick_config(3);
  cfg.dropout = 0.3;
  const auto a = train<double>(corpus, {}, testing::tiny_config(), cfg);
  const auto b = train<double>(corpus, {}, testing::tiny_config(), cfg);
  REQUIRE(a.history.size() == 3);
  for (std::size_t e = 0; e < 3; ++e) {
    CHECK(a.history[e].train_loss == b.history[e].train_loss);
  }
  CHECK(a.best.params.output_weight.value == b.best.params.output_weight.value);
}

TEST_CASE("training lowers the loss") {
  const auto corpus = make_synthetic_corpus({3, 4, 5, 11});
  const auto r = train<double>(corpus, corpus, testing::tiny_config(16, 16), quick_config(8));
  CHECK(r.history.back().dev_loss < r.history.front().dev_loss);
  CHECK(r.best_epoch >= 1);
}

TEST_CASE("patience stops training once dev loss worsens") {
  auto train_m = testing::gradient_meeting();
  train_m.summary = std::vector<std::string>{"plastic", "plastic", "plastic"};
  auto dev_m = testing::gradient_meeting();
  dev_m.summary = std::vector<std::string>{"rubber", "rubber"};
  auto cfg = quick_config(5);
  cfg.learning_rate = 0.05;
  const auto model = make_model<double>(testing::tiny_config(), testing::small_vocab(),
                                        testing::small_speakers(), 9);
  const std::vector<Meeting> train_set = {train_m, train_m, train_m};
  // Without early stopping the dev loss rises every epoch.
  const auto full = train(model, train_set, {dev_m}, cfg);
  REQUIRE(full.history.size() == 5);
  for (std::size_t e = 1; e < 5; ++e) {
    CHECK(full.history[e].dev_loss > full.history[e - 1].dev_loss);
  }
  cfg.patience = 1;
  const auto r = train(model, train_set, {dev_m}, cfg);
  CHECK(r.history.size() == 2);
  CHECK(r.best_epoch == 1);
}

TEST_CASE("training log line") {
  CHECK(format_epoch_line({3, 1.5, 0.25, true}) ==
        "epoch 3 train_loss 1.500000 dev_loss 0.250000");
}

TEST_CASE("empty corpus is rejected") {
  CHECK_THROWS_AS(train<double>({}, {}, testing::tiny_config(), quick_config(1)),
                  ValidationError);
}

TEST_CASE("zero pre-training epochs equal plain training") {
  const auto corpus = make_synthetic_corpus({3, 4, 5, 13});
  auto pre = quick_config(0);
  const auto ft = quick_config(2);
  const auto pseudo = make_synthetic_corpus({2, 4, 4, 14});
  const auto both = pretrain_finetune<double>(pseudo, {}, corpus, {}, testing::tiny_config(),
                                              pre, ft);
  const auto plain = train<double>(corpus, {}, testing::tiny_config(), ft);
  REQUIRE(both.finetuned.history.size() == plain.history.size());
  for (std::size_t e = 0; e < plain.history.size(); ++e) {
    CHECK(both.finetuned.history[e].train_loss == plain.history[e].train_loss);
  }
}

TEST_CASE("float models train too") {
  const auto corpus = make_synthetic_corpus({2, 4, 4, 17});
  const auto r = train<float>(corpus, {}, testing::tiny_config(), quick_config(2));
  CHECK(std::isfinite(r.history.back().train_loss));
}
