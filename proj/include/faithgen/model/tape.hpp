// Copyright 2026 The faithgen Authors
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

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace faithgen::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;
};

/// Owns a model's parameters in registration order. The order is part of the
/// checkpoint format.
template <typename T>
class ParameterSet {
 public:
  Parameter<T>& add(std::string name, Eigen::Index rows, Eigen::Index cols);
  void zero_grad();

  std::size_t size() const noexcept { return params_.size(); }
  std::size_t scalar_count() const noexcept;
  Parameter<T>& operator[](std::size_t i) { return *params_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return *params_[i]; }
  Parameter<T>* find(const std::string& name);

 private:
  std::vector<std::unique_ptr<Parameter<T>>> params_;
};

/// Per-position flags (1 = keep); a byte vector so it can be viewed as a span.
using Mask = std::vector<std::uint8_t>;

/// Handle to a node on a Tape.
struct Var {
  std::int32_t index = -1;
  bool valid() const noexcept { return index >= 0; }
};

/// Options for the contrastive term; see contrastive_loss in losses.hpp.
struct ContrastiveOptions {
  double temperature = 1.0;
  bool include_positive_in_denominator = false;
};

/// Reverse-mode automatic differentiation over row-major matrices. Nodes are
/// appended in evaluation order; backward() walks them in reverse. Parameter
/// leaves accumulate directly into Parameter::grad.
template <typename T>
class Tape {
 public:
  using Mat = Matrix<T>;

  Var constant(Mat value);
  Var param(Parameter<T>& p);

  const Mat& value(Var v) const;
  T scalar(Var v) const { return value(v)(0, 0); }

  Var matmul(Var a, Var b);     // a * b
  Var matmul_nt(Var a, Var b);  // a * b^T
  Var add(Var a, Var b);
  Var add_row(Var a, Var row);  // broadcasts a 1 x n row over a's rows
  Var scale(Var a, T factor);
  Var gelu(Var a);
  Var layer_norm(Var x, Var gain, Var bias, T eps = T(1e-5));
  /// Row softmax where column j of row i is excluded if !key_valid[j], or if
  /// `causal` and j > i. Fully masked rows produce zeros.
  Var masked_softmax(Var scores, std::span<const std::uint8_t> key_valid, bool causal);
  /// Multi-head scaled dot-product attention over column blocks of q, k, v
  /// (each head owns cols/heads consecutive columns); masks as masked_softmax.
  Var attention(Var q, Var k, Var v, int heads, std::span<const std::uint8_t> key_valid, bool causal);
  Var gather_rows(Var table, std::span<const std::int32_t> ids);
  Var columns(Var a, Eigen::Index start, Eigen::Index count);
  Var concat_columns(std::span<const Var> parts);
  /// Mean of the rows where keep[i] is true; 1 x cols.
  Var masked_mean_rows(Var a, std::span<const std::uint8_t> keep);
  Var dropout(Var a, double rate, std::mt19937_64& rng);
  /// Sum over rows i with targets[i] >= 0 of -log softmax(logits_i)[targets[i]].
  Var cross_entropy_sum(Var logits, std::span<const std::int32_t> targets);
  /// Contrastive objective over 1 x d representations.
  Var contrastive(Var anchor, std::span<const Var> positives, std::span<const Var> negatives,
                  const ContrastiveOptions& options);

  /// Seeds d(root)/d(root) = 1 and propagates gradients to every parameter
  /// reachable from `root`, which must be 1 x 1.
  void backward(Var root);

  std::size_t size() const noexcept { return nodes_.size(); }
  /// Drops every node created after the tape had `n` nodes.
  void truncate(std::size_t n) { nodes_.resize(std::min(n, nodes_.size())); }

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool has_grad = false;
    bool requires_grad = false;
    Parameter<T>* param = nullptr;
    std::function<void(Tape&, std::int32_t)> backward;
  };

  Var push(Mat value, std::initializer_list<Var> inputs, std::function<void(Tape&, std::int32_t)> backward);
  Var push(Mat value, std::span<const Var> inputs, std::function<void(Tape&, std::int32_t)> backward);
  // Gradient accumulator of `v`, zero-initialized on first use.
  Mat& grad_of(Var v);
  const Mat& out_grad(std::int32_t index) const { return nodes_[index].grad; }
  bool needs_grad(Var v) const { return nodes_[v.index].requires_grad; }

  std::vector<Node> nodes_;
};

}  // namespace faithgen::nn
