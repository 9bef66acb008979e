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
/// Minimal reverse-mode differentiation over dense Eigen matrices.
///
/// A Tape records every operation applied to its Vars. Parameter leaves
/// alias caller-owned value and gradient storage, so backward() writes
/// directly into the caller's gradient buffers and no parameter is copied
/// per forward pass. Column vectors are n x 1 matrices throughout.

#pragma once

#include <cassert>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace dgsum::ad {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar>;

template <typename Scalar>
class Tape;

template <typename Scalar>
class Var {
 public:
  Var() = default;
  Var(Tape<Scalar>* tape, int id) : tape_(tape), id_(id) {}

  Tape<Scalar>* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Matrix<Scalar>& value() const { return tape_->value(id_); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Scalar scalar() const { return value()(0, 0); }

 private:
  Tape<Scalar>* tape_ = nullptr;
  int id_ = -1;
};

template <typename Scalar>
class Tape {
 public:
  using Mat = Matrix<Scalar>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Non-differentiable input.
  Var<Scalar> constant(Mat value) {
    auto n = std::make_unique<Node>();
    n->own = std::move(value);
    return push(std::move(n));
  }

  /// Leaf aliasing `value`; gradients accumulate into `grad`, which must be
  /// pre-sized and outlive backward().
  Var<Scalar> parameter(const Mat& value, Mat& grad) {
    assert(grad.rows() == value.rows() && grad.cols() == value.cols());
    auto n = std::make_unique<Node>();
    n->ext = &value;
    n->ext_grad = &grad;
    n->needs_grad = true;
    return push(std::move(n));
  }

  /// Leaf aliasing `value` without gradient tracking.
  Var<Scalar> frozen(const Mat& value) {
    auto n = std::make_unique<Node>();
    n->ext = &value;
    return push(std::move(n));
  }

  const Mat& value(int id) const {
    const Node& n = *nodes_[id];
    return n.ext != nullptr ? *n.ext : n.own;
  }

  bool needs_grad(int id) const { return nodes_[id]->needs_grad; }

  /// Gradient buffer of an interior node, allocated on first use.
  Mat& grad(int id) {
    Node& n = *nodes_[id];
    if (n.ext_grad != nullptr) return *n.ext_grad;
    if (!n.has_grad) {
      const Mat& v = value(id);
      n.grad.setZero(v.rows(), v.cols());
      n.has_grad = true;
    }
    return n.grad;
  }

  bool has_grad(int id) const {
    const Node& n = *nodes_[id];
    return n.ext_grad != nullptr || n.has_grad;
  }

  std::size_t size() const { return nodes_.size(); }

  /// Drops every node recorded after the first `n`. Vars referring to them
  /// become dangling.
  void truncate(std::size_t n) {
    if (n < nodes_.size()) nodes_.resize(n);
  }

  /// Records an op. `backward` reads the output gradient via grad(out) and
  /// accumulates into inputs that need it.
  Var<Scalar> record(Mat value, std::initializer_list<Var<Scalar>> inputs,
                     std::function<void(Tape&, int)> backward) {
    auto n = std::make_unique<Node>();
    n->own = std::move(value);
    for (const auto& in : inputs) {
      if (in.tape() != this) {
        throw std::logic_error("autodiff: mixing Vars from different tapes");
      }
      n->needs_grad = n->needs_grad || nodes_[in.id()]->needs_grad;
    }
    if (n->needs_grad) n->backward = std::move(backward);
    return push(std::move(n));
  }

  Var<Scalar> record_n(Mat value, std::span<const Var<Scalar>> inputs,
                     std::function<void(Tape&, int)> backward) {
    auto n = std::make_unique<Node>();
    n->own = std::move(value);
    for (const auto& in : inputs) {
      if (in.tape() != this) {
        throw std::logic_error("autodiff: mixing Vars from different tapes");
      }
      n->needs_grad = n->needs_grad || nodes_[in.id()]->needs_grad;
    }
    if (n->needs_grad) n->backward = std::move(backward);
    return push(std::move(n));
  }

  /// Seeds d(root)/d(root) = 1 for a 1x1 root and runs the reverse sweep.
  void backward(const Var<Scalar>& root) {
    if (root.rows() != 1 || root.cols() != 1) {
      throw std::logic_error("autodiff: backward() needs a scalar root");
    }
    grad(root.id())(0, 0) += Scalar(1);
    for (int id = root.id(); id >= 0; --id) {
      Node& n = *nodes_[id];
      if (n.backward && has_grad(id)) n.backward(*this, id);
    }
  }

 private:
  struct Node {
    Mat own;
    const Mat* ext = nullptr;
    Mat grad;
    Mat* ext_grad = nullptr;
    bool has_grad = false;
    bool needs_grad = false;
    std::function<void(Tape&, int)> backward;
  };

  Var<Scalar> push(std::unique_ptr<Node> n) {
    nodes_.push_back(std::move(n));
    return Var<Scalar>(this, static_cast<int>(nodes_.size()) - 1);
  }

  std::vector<std::unique_ptr<Node>> nodes_;
};

// ---------------------------------------------------------------------------
// Operations. Each returns a new Var on the inputs' tape.

template <typename S>
Var<S> matmul(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(a.value() * b.value(), {a, b},
                          [ia, ib](Tape<S>& t, int out) {
                            const auto& g = t.grad(out);
                            if (t.needs_grad(ia)) {
                              t.grad(ia).noalias() += g * t.value(ib).transpose();
                            }
                            if (t.needs_grad(ib)) {
                              t.grad(ib).noalias() += t.value(ia).transpose() * g;
                            }
                          });
}

/// a * adjacency for a constant sparse right operand.
template <typename S>
Var<S> matmul(const Var<S>& a, std::shared_ptr<const SparseMatrix<S>> adjacency) {
  const int ia = a.id();
  Matrix<S> out = a.value() * (*adjacency);
  return a.tape()->record(std::move(out), {a},
                          [ia, adjacency](Tape<S>& t, int o) {
                            t.grad(ia).noalias() +=
                                t.grad(o) * adjacency->transpose();
                          });
}

template <typename S>
Var<S> operator+(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("autodiff: shape mismatch in +");
  }
  return a.tape()->record(a.value() + b.value(), {a, b},
                          [ia, ib](Tape<S>& t, int out) {
                            if (t.needs_grad(ia)) t.grad(ia) += t.grad(out);
                            if (t.needs_grad(ib)) t.grad(ib) += t.grad(out);
                          });
}

template <typename S>
Var<S> operator-(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("autodiff: shape mismatch in -");
  }
  return a.tape()->record(a.value() - b.value(), {a, b},
                          [ia, ib](Tape<S>& t, int out) {
                            if (t.needs_grad(ia)) t.grad(ia) += t.grad(out);
                            if (t.needs_grad(ib)) t.grad(ib) -= t.grad(out);
                          });
}

/// Sum of several same-shaped Vars.
template <typename S>
Var<S> sum(std::span<const Var<S>> terms) {
  if (terms.empty()) throw std::invalid_argument("autodiff: empty sum");
  Matrix<S> v = terms[0].value();
  for (std::size_t k = 1; k < terms.size(); ++k) v += terms[k].value();
  std::vector<int> ids;
  for (const auto& x : terms) ids.push_back(x.id());
  return terms[0].tape()->record_n(std::move(v), terms,
                                 [ids](Tape<S>& t, int out) {
                                   for (int id : ids) {
                                     if (t.needs_grad(id)) t.grad(id) += t.grad(out);
                                   }
                                 });
}

/// Elementwise product.
template <typename S>
Var<S> cmul(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(
      a.value().cwiseProduct(b.value()), {a, b}, [ia, ib](Tape<S>& t, int out) {
        if (t.needs_grad(ia)) t.grad(ia) += t.grad(out).cwiseProduct(t.value(ib));
        if (t.needs_grad(ib)) t.grad(ib) += t.grad(out).cwiseProduct(t.value(ia));
      });
}

/// Elementwise product with a constant mask (dropout).
template <typename S>
Var<S> cmul(const Var<S>& a, Matrix<S> mask) {
  const int ia = a.id();
  auto m = std::make_shared<const Matrix<S>>(std::move(mask));
  return a.tape()->record(a.value().cwiseProduct(*m), {a},
                          [ia, m](Tape<S>& t, int out) {
                            t.grad(ia) += t.grad(out).cwiseProduct(*m);
                          });
}

/// alpha * a + beta, elementwise.
template <typename S>
Var<S> affine(const Var<S>& a, S alpha, S beta) {
  const int ia = a.id();
  Matrix<S> v = (alpha * a.value().array() + beta).matrix();
  return a.tape()->record(std::move(v), {a}, [ia, alpha](Tape<S>& t, int out) {
    t.grad(ia) += alpha * t.grad(out);
  });
}

/// a scaled by the single entry of the 1x1 Var `s`.
template <typename S>
Var<S> scale(const Var<S>& a, const Var<S>& s) {
  const int ia = a.id(), is = s.id();
  if (s.rows() != 1 || s.cols() != 1) {
    throw std::invalid_argument("autodiff: scale() needs a 1x1 factor");
  }
  return a.tape()->record(a.value() * s.scalar(), {a, s},
                          [ia, is](Tape<S>& t, int out) {
                            const auto& g = t.grad(out);
                            if (t.needs_grad(ia)) t.grad(ia) += g * t.value(is)(0, 0);
                            if (t.needs_grad(is)) {
                              t.grad(is)(0, 0) += g.cwiseProduct(t.value(ia)).sum();
                            }
                          });
}

/// Column j of m scaled by entry j of the 1 x n row `weights`.
template <typename S>
Var<S> scale_columns(const Var<S>& m, const Var<S>& weights) {
  const int im = m.id(), iw = weights.id();
  if (weights.rows() != 1 || weights.cols() != m.cols()) {
    throw std::invalid_argument("autodiff: scale_columns() shape mismatch");
  }
  Matrix<S> v = m.value() * weights.value().transpose().asDiagonal();
  return m.tape()->record(std::move(v), {m, weights},
                          [im, iw](Tape<S>& t, int out) {
                            const auto& g = t.grad(out);
                            if (t.needs_grad(im)) {
                              t.grad(im) += g * t.value(iw).transpose().asDiagonal();
                            }
                            if (t.needs_grad(iw)) {
                              t.grad(iw) += g.cwiseProduct(t.value(im))
                                                .colwise()
                                                .sum();
                            }
                          });
}

template <typename S>
Var<S> sigmoid(const Var<S>& a) {
  const int ia = a.id();
  Matrix<S> v = a.value().unaryExpr([](S x) {
    // Split by sign so neither branch overflows.
    if (x >= S(0)) return S(1) / (S(1) + std::exp(-x));
    const S e = std::exp(x);
    return e / (S(1) + e);
  });
  return a.tape()->record(std::move(v), {a}, [ia](Tape<S>& t, int out) {
    const auto& y = t.value(out);
    t.grad(ia) += t.grad(out)
                      .cwiseProduct(y)
                      .cwiseProduct((S(1) - y.array()).matrix());
  });
}

template <typename S>
Var<S> tanh(const Var<S>& a) {
  const int ia = a.id();
  Matrix<S> v = a.value().array().tanh().matrix();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<S>& t, int out) {
    const auto& y = t.value(out);
    t.grad(ia) += t.grad(out).cwiseProduct(
        (S(1) - y.array().square()).matrix());
  });
}

template <typename S>
Var<S> relu(const Var<S>& a) {
  const int ia = a.id();
  Matrix<S> v = a.value().cwiseMax(S(0));
  return a.tape()->record(std::move(v), {a}, [ia](Tape<S>& t, int out) {
    const auto& x = t.value(ia);
    t.grad(ia) += (x.array() > S(0)).select(t.grad(out), S(0));
  });
}

/// Natural log, elementwise.
template <typename S>
Var<S> log(const Var<S>& a) {
  const int ia = a.id();
  Matrix<S> v = a.value().array().log().matrix();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<S>& t, int out) {
    t.grad(ia) += t.grad(out).cwiseQuotient(t.value(ia));
  });
}

/// Softmax over every entry of `a` (a vector in practice).
template <typename S>
Var<S> softmax(const Var<S>& a) {
  const int ia = a.id();
  const S m = a.value().maxCoeff();
  Matrix<S> v = (a.value().array() - m).exp().matrix();
  v /= v.sum();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<S>& t, int out) {
    const auto& y = t.value(out);
    const auto& g = t.grad(out);
    const S dot = g.cwiseProduct(y).sum();
    t.grad(ia) += y.cwiseProduct((g.array() - dot).matrix());
  });
}

template <typename S>
Var<S> transpose(const Var<S>& a) {
  const int ia = a.id();
  return a.tape()->record(a.value().transpose(), {a},
                          [ia](Tape<S>& t, int out) {
                            t.grad(ia) += t.grad(out).transpose();
                          });
}

/// Entry (i, j) as a 1x1 Var.
template <typename S>
Var<S> entry(const Var<S>& a, Eigen::Index i, Eigen::Index j = 0) {
  const int ia = a.id();
  Matrix<S> v(1, 1);
  v(0, 0) = a.value()(i, j);
  return a.tape()->record(std::move(v), {a}, [ia, i, j](Tape<S>& t, int out) {
    t.grad(ia)(i, j) += t.grad(out)(0, 0);
  });
}

/// Rows [start, start + count).
template <typename S>
Var<S> rows(const Var<S>& a, Eigen::Index start, Eigen::Index count) {
  const int ia = a.id();
  return a.tape()->record(a.value().middleRows(start, count), {a},
                          [ia, start, count](Tape<S>& t, int out) {
                            t.grad(ia).middleRows(start, count) += t.grad(out);
                          });
}

/// Columns [start, start + count).
template <typename S>
Var<S> cols(const Var<S>& a, Eigen::Index start, Eigen::Index count) {
  const int ia = a.id();
  return a.tape()->record(a.value().middleCols(start, count), {a},
                          [ia, start, count](Tape<S>& t, int out) {
                            t.grad(ia).middleCols(start, count) += t.grad(out);
                          });
}

template <typename S>
Var<S> col(const Var<S>& a, Eigen::Index j) {
  return cols(a, j, 1);
}

/// Stacks Vars with equal column counts top to bottom.
template <typename S>
Var<S> vcat(std::span<const Var<S>> parts) {
  if (parts.empty()) throw std::invalid_argument("autodiff: empty vcat");
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.rows();
  Matrix<S> v(total, parts[0].cols());
  std::vector<std::pair<int, Eigen::Index>> spans;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    if (p.cols() != v.cols()) {
      throw std::invalid_argument("autodiff: vcat column mismatch");
    }
    v.middleRows(at, p.rows()) = p.value();
    spans.emplace_back(p.id(), at);
    at += p.rows();
  }
  return parts[0].tape()->record_n(std::move(v), parts,
                                 [spans](Tape<S>& t, int out) {
                                   const auto& g = t.grad(out);
                                   for (auto [id, start] : spans) {
                                     if (!t.needs_grad(id)) continue;
                                     auto& gi = t.grad(id);
                                     gi += g.middleRows(start, gi.rows());
                                   }
                                 });
}

template <typename S>
Var<S> vcat(std::initializer_list<Var<S>> parts) {
  return vcat(std::span<const Var<S>>(parts.begin(), parts.size()));
}

/// Places Vars with equal row counts left to right.
template <typename S>
Var<S> hcat(std::span<const Var<S>> parts) {
  if (parts.empty()) throw std::invalid_argument("autodiff: empty hcat");
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.cols();
  Matrix<S> v(parts[0].rows(), total);
  std::vector<std::pair<int, Eigen::Index>> spans;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    if (p.rows() != v.rows()) {
      throw std::invalid_argument("autodiff: hcat row mismatch");
    }
    v.middleCols(at, p.cols()) = p.value();
    spans.emplace_back(p.id(), at);
    at += p.cols();
  }
  return parts[0].tape()->record_n(std::move(v), parts,
                                 [spans](Tape<S>& t, int out) {
                                   const auto& g = t.grad(out);
                                   for (auto [id, start] : spans) {
                                     if (!t.needs_grad(id)) continue;
                                     auto& gi = t.grad(id);
                                     gi += g.middleCols(start, gi.cols());
                                   }
                                 });
}

/// out[index[k]] += a[k] for a column vector `a`; out has `size` rows.
template <typename S>
Var<S> scatter_add(const Var<S>& a, std::vector<int> index, Eigen::Index size) {
  const int ia = a.id();
  if (a.cols() != 1 || a.rows() != static_cast<Eigen::Index>(index.size())) {
    throw std::invalid_argument("autodiff: scatter_add shape mismatch");
  }
  Matrix<S> v = Matrix<S>::Zero(size, 1);
  for (std::size_t k = 0; k < index.size(); ++k) v(index[k], 0) += a.value()(k, 0);
  return a.tape()->record(std::move(v), {a},
                          [ia, index = std::move(index)](Tape<S>& t, int out) {
                            const auto& g = t.grad(out);
                            auto& ga = t.grad(ia);
                            for (std::size_t k = 0; k < index.size(); ++k) {
                              ga(k, 0) += g(index[k], 0);
                            }
                          });
}

/// Appends zero rows so the result has `size` rows.
template <typename S>
Var<S> pad_rows(const Var<S>& a, Eigen::Index size) {
  const int ia = a.id();
  Matrix<S> v = Matrix<S>::Zero(size, a.cols());
  v.topRows(a.rows()) = a.value();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<S>& t, int out) {
    auto& ga = t.grad(ia);
    ga += t.grad(out).topRows(ga.rows());
  });
}

}  // namespace dgsum::ad
