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

#include <functional>
#include <random>

#include "dgsum/autodiff.hpp"

using namespace dgsum;
using ad::Matrix;
using ad::Tape;
using ad::Var;

namespace {

using Fn = std::function<Var<double>(Tape<double>&, std::vector<Var<double>>&)>;

Matrix<double> random_matrix(std::mt19937_64& rng, int r, int c, double lo = -1.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix<double> m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = u(rng);
  return m;
}

// Reduces `out` to a scalar with fixed random weights so every output entry
// contributes a distinct amount.
Var<double> weighted_sum(Tape<double>& t, const Var<double>& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto w = random_matrix(rng, static_cast<int>(out.rows()), static_cast<int>(out.cols()));
  const auto masked = ad::cmul(out, w);
  const auto left = t.constant(Matrix<double>::Ones(1, out.rows()));
  const auto right = t.constant(Matrix<double>::Ones(out.cols(), 1));
  return ad::matmul(ad::matmul(left, masked), right);
}

// Max relative error between backward() and central differences over all
// entries of all inputs.
double check(std::vector<Matrix<double>> inputs, const Fn& f) {
  std::vector<Matrix<double>> grads;
  for (const auto& x : inputs) grads.push_back(Matrix<double>::Zero(x.rows(), x.cols()));
  const auto eval = [&](bool with_grad) {
    Tape<double> t;
    std::vector<Var<double>> vars;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      vars.push_back(with_grad ? t.parameter(inputs[i], grads[i]) : t.frozen(inputs[i]));
    }
    const auto loss = weighted_sum(t, f(t, vars), 99);
    if (with_grad) t.backward(loss);
    return loss.scalar();
  };
  eval(true);
  double worst = 0.0;
  const double eps = 1e-6;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (Eigen::Index k = 0; k < inputs[i].size(); ++k) {
      const double saved = inputs[i].data()[k];
      inputs[i].data()[k] = saved + eps;
      const double up = eval(false);
      inputs[i].data()[k] = saved - eps;
      const double down = eval(false);
      inputs[i].data()[k] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double analytic = grads[i].data()[k];
      const double err = std::abs(numeric - analytic) /
                         std::max({std::abs(numeric), std::abs(analytic), 1e-6});
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("operation gradients match central differences") {
  std::mt19937_64 rng(1);
  const auto a = random_matrix(rng, 3, 4);
  const auto b = random_matrix(rng, 4, 2);
  const auto c = random_matrix(rng, 3, 4);
  const auto col3 = random_matrix(rng, 3, 1);
  const auto row4 = random_matrix(rng, 1, 4);
  const auto one = random_matrix(rng, 1, 1);
  const auto pos = random_matrix(rng, 3, 4, 0.5, 2.0);
  const double tol = 1e-6;

  CHECK(check({a, b}, [](auto&, auto& v) { return ad::matmul(v[0], v[1]); }) < tol);
  CHECK(check({a, c}, [](auto&, auto& v) { return v[0] + v[1]; }) < tol);
  CHECK(check({a, c}, [](auto&, auto& v) { return v[0] - v[1]; }) < tol);
  CHECK(check({a, c}, [](auto&, auto& v) { return ad::cmul(v[0], v[1]); }) < tol);
  CHECK(check({a}, [&](auto&, auto& v) { return ad::cmul(v[0], c); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::affine(v[0], 2.5, -1.0); }) < tol);
  CHECK(check({a, one}, [](auto&, auto& v) { return ad::scale(v[0], v[1]); }) < tol);
  CHECK(check({a, row4}, [](auto&, auto& v) { return ad::scale_columns(v[0], v[1]); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::sigmoid(v[0]); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::tanh(v[0]); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::relu(v[0]); }) < tol);
  CHECK(check({pos}, [](auto&, auto& v) { return ad::log(v[0]); }) < tol);
  CHECK(check({col3}, [](auto&, auto& v) { return ad::softmax(v[0]); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::transpose(v[0]); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::entry(v[0], 2, 1); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::rows(v[0], 1, 2); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::cols(v[0], 1, 2); }) < tol);
  CHECK(check({a}, [](auto&, auto& v) { return ad::col(v[0], 3); }) < tol);
  CHECK(check({a, c}, [](auto&, auto& v) { return ad::vcat({v[0], v[1]}); }) < tol);
  CHECK(check({a, c}, [](auto&, auto& v) { return ad::hcat<double>(std::vector<Var<double>>{v[0], v[1]}); }) < tol);
  CHECK(check({a, c, a}, [](auto&, auto& v) {
          return ad::sum(std::span<const Var<double>>(v));
        }) < tol);
  CHECK(check({col3}, [](auto&, auto& v) { return ad::scatter_add(v[0], {2, 0, 2}, 4); }) < tol);
  CHECK(check({col3}, [](auto&, auto& v) { return ad::pad_rows(v[0], 6); }) < tol);

  auto sparse = std::make_shared<ad::SparseMatrix<double>>(4, 3);
  sparse->insert(0, 0) = 0.5;
  sparse->insert(3, 0) = 0.5;
  sparse->insert(1, 2) = 1.0;
  sparse->makeCompressed();
  std::shared_ptr<const ad::SparseMatrix<double>> adj = sparse;
  CHECK(check({a}, [&](auto&, auto& v) { return ad::matmul(v[0], adj); }) < tol);
}

TEST_CASE("reused variables accumulate gradient") {
  Matrix<double> x(1, 1), g = Matrix<double>::Zero(1, 1);
  x << 3.0;
  Tape<double> t;
  const auto v = t.parameter(x, g);
  const auto y = ad::cmul(v, v) + v;  // x^2 + x
  t.backward(y);
  CHECK(g(0, 0) == doctest::Approx(7.0));
}

TEST_CASE("softmax sums to one and tolerates large logits") {
  Tape<double> t;
  Matrix<double> z(3, 1);
  z << 1000.0, 1001.0, 999.0;
  const auto p = ad::softmax(t.constant(z));
  CHECK(p.value().sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.value().allFinite());
}

TEST_CASE("frozen inputs get no gradient and constants do not propagate") {
  Matrix<double> x = Matrix<double>::Ones(2, 2);
  Tape<double> t;
  const auto v = t.frozen(x);
  const auto y = ad::matmul(ad::matmul(t.constant(Matrix<double>::Ones(1, 2)), v),
                            t.constant(Matrix<double>::Ones(2, 1)));
  CHECK_FALSE(t.needs_grad(y.id()));
  t.backward(y);  // no-op sweep
  CHECK(y.scalar() == 4.0);
}

TEST_CASE("shape errors") {
  Tape<double> t;
  const auto a = t.constant(Matrix<double>::Ones(2, 3));
  const auto b = t.constant(Matrix<double>::Ones(2, 2));
  CHECK_THROWS(a + b);
  CHECK_THROWS(t.backward(a));
  Tape<double> other;
  const auto c = other.constant(Matrix<double>::Ones(2, 3));
  CHECK_THROWS_AS(a + c, std::logic_error);
}
