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

#include "faithgen/model/tape.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "faithgen/model/contrastive.hpp"

namespace faithgen::nn {

template <typename T>
Parameter<T>& ParameterSet<T>::add(std::string name, Eigen::Index rows, Eigen::Index cols) {
  auto p = std::make_unique<Parameter<T>>();
  p->name = std::move(name);
  p->value = Matrix<T>::Zero(rows, cols);
  p->grad = Matrix<T>::Zero(rows, cols);
  params_.push_back(std::move(p));
  return *params_.back();
}

template <typename T>
void ParameterSet<T>::zero_grad() {
  for (auto& p : params_) p->grad.setZero();
}

template <typename T>
std::size_t ParameterSet<T>::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

template <typename T>
Parameter<T>* ParameterSet<T>::find(const std::string& name) {
  for (auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

template <typename T>
Var Tape<T>::push(Mat value, std::initializer_list<Var> inputs,
                  std::function<void(Tape&, std::int32_t)> backward) {
  return push(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(backward));
}

template <typename T>
Var Tape<T>::push(Mat value, std::span<const Var> inputs, std::function<void(Tape&, std::int32_t)> backward) {
  Node node;
  node.value = std::move(value);
  for (Var in : inputs) node.requires_grad = node.requires_grad || needs_grad(in);
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

template <typename T>
Var Tape<T>::constant(Mat value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

template <typename T>
Var Tape<T>::param(Parameter<T>& p) {
  Node node;
  node.param = &p;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

template <typename T>
const typename Tape<T>::Mat& Tape<T>::value(Var v) const {
  const Node& n = nodes_[v.index];
  return n.param ? n.param->value : n.value;
}

template <typename T>
typename Tape<T>::Mat& Tape<T>::grad_of(Var v) {
  Node& n = nodes_[v.index];
  if (n.param) return n.param->grad;
  if (!n.has_grad) {
    n.grad = Mat::Zero(value(v).rows(), value(v).cols());
    n.has_grad = true;
  }
  return n.grad;
}

template <typename T>
Var Tape<T>::matmul(Var a, Var b) {
  return push(value(a) * value(b), {a, b}, [a, b](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    if (t.needs_grad(a)) t.grad_of(a).noalias() += g * t.value(b).transpose();
    if (t.needs_grad(b)) t.grad_of(b).noalias() += t.value(a).transpose() * g;
  });
}

template <typename T>
Var Tape<T>::matmul_nt(Var a, Var b) {
  return push(value(a) * value(b).transpose(), {a, b}, [a, b](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    if (t.needs_grad(a)) t.grad_of(a).noalias() += g * t.value(b);
    if (t.needs_grad(b)) t.grad_of(b).noalias() += g.transpose() * t.value(a);
  });
}

template <typename T>
Var Tape<T>::add(Var a, Var b) {
  if (value(a).rows() != value(b).rows() || value(a).cols() != value(b).cols()) {
    throw std::invalid_argument("tape add: shape mismatch");
  }
  return push(value(a) + value(b), {a, b}, [a, b](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    if (t.needs_grad(a)) t.grad_of(a) += g;
    if (t.needs_grad(b)) t.grad_of(b) += g;
  });
}

template <typename T>
Var Tape<T>::add_row(Var a, Var row) {
  Mat out = value(a);
  out.rowwise() += value(row).row(0);
  return push(std::move(out), {a, row}, [a, row](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    if (t.needs_grad(a)) t.grad_of(a) += g;
    if (t.needs_grad(row)) t.grad_of(row) += g.colwise().sum();
  });
}

template <typename T>
Var Tape<T>::scale(Var a, T factor) {
  return push(value(a) * factor, {a}, [a, factor](Tape& t, std::int32_t self) {
    t.grad_of(a) += t.out_grad(self) * factor;
  });
}

namespace {
template <typename T>
constexpr T kGeluC = T(0.7978845608028654);  // sqrt(2 / pi)
template <typename T>
constexpr T kGeluK = T(0.044715);
}  // namespace

template <typename T>
Var Tape<T>::gelu(Var a) {
  constexpr T kC = kGeluC<T>;
  constexpr T kK = kGeluK<T>;
  const Mat& x = value(a);
  Mat th = (kC * (x.array() + kK * x.array().cube())).tanh().matrix();
  Mat out = (T(0.5) * x.array() * (T(1) + th.array())).matrix();
  return push(std::move(out), {a}, [a, th = std::move(th)](Tape& t, std::int32_t self) {
    constexpr T kC = kGeluC<T>;
    constexpr T kK = kGeluK<T>;
    const auto x = t.value(a).array();
    const auto d = T(0.5) * (T(1) + th.array()) +
                   T(0.5) * x * (T(1) - th.array().square()) * kC * (T(1) + T(3) * kK * x.square());
    t.grad_of(a).array() += t.out_grad(self).array() * d;
  });
}

template <typename T>
Var Tape<T>::layer_norm(Var x, Var gain, Var bias, T eps) {
  const Mat& in = value(x);
  const Eigen::Index cols = in.cols();
  Mat normalized(in.rows(), cols);
  Eigen::Matrix<T, Eigen::Dynamic, 1> inv_std(in.rows());
  for (Eigen::Index i = 0; i < in.rows(); ++i) {
    const T mean = in.row(i).mean();
    const auto centered = in.row(i).array() - mean;
    const T var = centered.square().mean();
    inv_std(i) = T(1) / std::sqrt(var + eps);
    normalized.row(i) = (centered * inv_std(i)).matrix();
  }
  Mat out = (normalized.array().rowwise() * value(gain).row(0).array()).matrix();
  out.rowwise() += value(bias).row(0);
  return push(std::move(out), {x, gain, bias},
              [x, gain, bias, normalized = std::move(normalized), inv_std = std::move(inv_std)](
                  Tape& t, std::int32_t self) {
                const Mat& g = t.out_grad(self);
                if (t.needs_grad(gain)) {
                  t.grad_of(gain) += (g.array() * normalized.array()).matrix().colwise().sum();
                }
                if (t.needs_grad(bias)) t.grad_of(bias) += g.colwise().sum();
                if (!t.needs_grad(x)) return;
                Mat& dx = t.grad_of(x);
                const auto gain_row = t.value(gain).row(0).array();
                for (Eigen::Index i = 0; i < g.rows(); ++i) {
                  const auto dn = (g.row(i).array() * gain_row).eval();
                  const T mean_dn = dn.mean();
                  const T mean_dn_n = (dn * normalized.row(i).array()).mean();
                  dx.row(i).array() += inv_std(i) * (dn - mean_dn - normalized.row(i).array() * mean_dn_n);
                }
              });
}

template <typename T>
Var Tape<T>::masked_softmax(Var scores, std::span<const std::uint8_t> key_valid, bool causal) {
  const Mat& s = value(scores);
  if (static_cast<Eigen::Index>(key_valid.size()) != s.cols()) {
    throw std::invalid_argument("masked_softmax: mask size mismatch");
  }
  Mat p = Mat::Zero(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const Eigen::Index limit = causal ? std::min<Eigen::Index>(i + 1, s.cols()) : s.cols();
    T m = -std::numeric_limits<T>::infinity();
    for (Eigen::Index j = 0; j < limit; ++j) {
      if (key_valid[j]) m = std::max(m, s(i, j));
    }
    if (m == -std::numeric_limits<T>::infinity()) continue;
    T z = T(0);
    for (Eigen::Index j = 0; j < limit; ++j) {
      if (key_valid[j]) {
        p(i, j) = std::exp(s(i, j) - m);
        z += p(i, j);
      }
    }
    p.row(i).head(limit) /= z;
  }
  return push(p, {scores}, [scores, p](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    const auto dot = (g.array() * p.array()).rowwise().sum().eval();
    t.grad_of(scores).array() += p.array() * (g.array().colwise() - dot);
  });
}

namespace {

// Row softmax of scores restricted to valid (and, if causal, non-future) keys.
template <typename T>
void masked_softmax_into(const Matrix<T>& s, std::span<const std::uint8_t> key_valid, bool causal, Matrix<T>& p) {
  p.setZero(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const Eigen::Index limit = causal ? std::min<Eigen::Index>(i + 1, s.cols()) : s.cols();
    T m = -std::numeric_limits<T>::infinity();
    for (Eigen::Index j = 0; j < limit; ++j) {
      if (key_valid[j]) m = std::max(m, s(i, j));
    }
    if (m == -std::numeric_limits<T>::infinity()) continue;
    T z = T(0);
    for (Eigen::Index j = 0; j < limit; ++j) {
      if (key_valid[j]) {
        p(i, j) = std::exp(s(i, j) - m);
        z += p(i, j);
      }
    }
    p.row(i).head(limit) /= z;
  }
}

}  // namespace

template <typename T>
Var Tape<T>::attention(Var q, Var k, Var v, int heads, std::span<const std::uint8_t> key_valid, bool causal) {
  const Mat& qm = value(q);
  const Mat& km = value(k);
  const Mat& vm = value(v);
  if (qm.cols() != km.cols() || km.cols() != vm.cols() || km.rows() != vm.rows() || qm.cols() % heads != 0) {
    throw std::invalid_argument("attention: incompatible shapes");
  }
  if (static_cast<Eigen::Index>(key_valid.size()) != km.rows()) {
    throw std::invalid_argument("attention: mask size mismatch");
  }
  const Eigen::Index dh = qm.cols() / heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));
  std::vector<Mat> probs(static_cast<std::size_t>(heads));
  Mat out(qm.rows(), qm.cols());
  Mat scores;
  for (int h = 0; h < heads; ++h) {
    scores.noalias() = qm.middleCols(h * dh, dh) * km.middleCols(h * dh, dh).transpose();
    scores *= scale;
    masked_softmax_into<T>(scores, key_valid, causal, probs[h]);
    out.middleCols(h * dh, dh).noalias() = probs[h] * vm.middleCols(h * dh, dh);
  }
  return push(std::move(out), {q, k, v},
              [q, k, v, heads, dh, scale, probs = std::move(probs)](Tape& t, std::int32_t self) {
                const Mat& g = t.out_grad(self);
                const Mat& qm = t.value(q);
                const Mat& km = t.value(k);
                const Mat& vm = t.value(v);
                Mat dp, ds;
                for (int h = 0; h < heads; ++h) {
                  const Mat& p = probs[h];
                  const auto g_h = g.middleCols(h * dh, dh);
                  if (t.needs_grad(v)) t.grad_of(v).middleCols(h * dh, dh).noalias() += p.transpose() * g_h;
                  dp.noalias() = g_h * vm.middleCols(h * dh, dh).transpose();
                  const auto dot = (dp.array() * p.array()).rowwise().sum().eval();
                  ds = (p.array() * (dp.array().colwise() - dot)).matrix() * scale;
                  if (t.needs_grad(q)) t.grad_of(q).middleCols(h * dh, dh).noalias() += ds * km.middleCols(h * dh, dh);
                  if (t.needs_grad(k)) t.grad_of(k).middleCols(h * dh, dh).noalias() += ds.transpose() * qm.middleCols(h * dh, dh);
                }
              });
}

template <typename T>
Var Tape<T>::gather_rows(Var table, std::span<const std::int32_t> ids) {
  const Mat& tab = value(table);
  Mat out(static_cast<Eigen::Index>(ids.size()), tab.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= tab.rows()) throw std::out_of_range("gather_rows: id out of range");
    out.row(static_cast<Eigen::Index>(i)) = tab.row(ids[i]);
  }
  std::vector<std::int32_t> rows(ids.begin(), ids.end());
  return push(std::move(out), {table}, [table, rows = std::move(rows)](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    Mat& dt = t.grad_of(table);
    for (std::size_t i = 0; i < rows.size(); ++i) dt.row(rows[i]) += g.row(static_cast<Eigen::Index>(i));
  });
}

template <typename T>
Var Tape<T>::columns(Var a, Eigen::Index start, Eigen::Index count) {
  Mat out = value(a).middleCols(start, count);
  return push(std::move(out), {a}, [a, start, count](Tape& t, std::int32_t self) {
    t.grad_of(a).middleCols(start, count) += t.out_grad(self);
  });
}

template <typename T>
Var Tape<T>::concat_columns(std::span<const Var> parts) {
  Eigen::Index cols = 0;
  const Eigen::Index rows = value(parts.front()).rows();
  for (Var p : parts) cols += value(p).cols();
  Mat out(rows, cols);
  Eigen::Index offset = 0;
  for (Var p : parts) {
    out.middleCols(offset, value(p).cols()) = value(p);
    offset += value(p).cols();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return push(std::move(out), parts, [inputs](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    Eigen::Index off = 0;
    for (Var p : inputs) {
      const Eigen::Index c = t.value(p).cols();
      if (t.needs_grad(p)) t.grad_of(p) += g.middleCols(off, c);
      off += c;
    }
  });
}

template <typename T>
Var Tape<T>::masked_mean_rows(Var a, std::span<const std::uint8_t> keep) {
  const Mat& x = value(a);
  if (static_cast<Eigen::Index>(keep.size()) != x.rows()) {
    throw std::invalid_argument("masked_mean_rows: mask size mismatch");
  }
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) rows.push_back(static_cast<Eigen::Index>(i));
  }
  if (rows.empty()) throw std::invalid_argument("masked_mean_rows: no rows selected");
  Mat out = Mat::Zero(1, x.cols());
  for (Eigen::Index r : rows) out += x.row(r);
  const T inv = T(1) / static_cast<T>(rows.size());
  out *= inv;
  return push(std::move(out), {a}, [a, rows = std::move(rows), inv](Tape& t, std::int32_t self) {
    const Mat& g = t.out_grad(self);
    Mat& da = t.grad_of(a);
    for (Eigen::Index r : rows) da.row(r) += g * inv;
  });
}

template <typename T>
Var Tape<T>::dropout(Var a, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0) return a;
  const Mat& x = value(a);
  std::bernoulli_distribution keep(1.0 - rate);
  const T scale = T(1) / static_cast<T>(1.0 - rate);
  Mat mask(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = keep(rng) ? scale : T(0);
  Mat out = (x.array() * mask.array()).matrix();
  return push(std::move(out), {a}, [a, mask = std::move(mask)](Tape& t, std::int32_t self) {
    t.grad_of(a).array() += t.out_grad(self).array() * mask.array();
  });
}

template <typename T>
Var Tape<T>::cross_entropy_sum(Var logits, std::span<const std::int32_t> targets) {
  const Mat& z = value(logits);
  if (static_cast<Eigen::Index>(targets.size()) != z.rows()) {
    throw std::invalid_argument("cross_entropy_sum: target count mismatch");
  }
  Mat probs(z.rows(), z.cols());
  T loss = T(0);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const T m = z.row(i).maxCoeff();
    probs.row(i) = (z.row(i).array() - m).exp().matrix();
    const T sum = probs.row(i).sum();
    probs.row(i) /= sum;
    const std::int32_t y = targets[static_cast<std::size_t>(i)];
    if (y >= 0) loss -= z(i, y) - m - std::log(sum);
  }
  Mat out(1, 1);
  out(0, 0) = loss;
  std::vector<std::int32_t> ys(targets.begin(), targets.end());
  return push(std::move(out), {logits},
              [logits, probs = std::move(probs), ys = std::move(ys)](Tape& t, std::int32_t self) {
                const T g = t.out_grad(self)(0, 0);
                Mat& dz = t.grad_of(logits);
                for (std::size_t i = 0; i < ys.size(); ++i) {
                  if (ys[i] < 0) continue;
                  const auto r = static_cast<Eigen::Index>(i);
                  dz.row(r) += g * probs.row(r);
                  dz(r, ys[i]) -= g;
                }
              });
}

template <typename T>
Var Tape<T>::contrastive(Var anchor, std::span<const Var> positives, std::span<const Var> negatives,
                         const ContrastiveOptions& options) {
  std::vector<RowVector<T>> pos, neg;
  for (Var v : positives) pos.push_back(value(v).row(0));
  for (Var v : negatives) neg.push_back(value(v).row(0));
  const RowVector<T> a = value(anchor).row(0);
  auto terms = contrastive_terms<T>(a, pos, neg, options, true);
  Mat out(1, 1);
  out(0, 0) = terms.loss;
  std::vector<Var> inputs{anchor};
  inputs.insert(inputs.end(), positives.begin(), positives.end());
  inputs.insert(inputs.end(), negatives.begin(), negatives.end());
  std::vector<Var> pos_vars(positives.begin(), positives.end());
  std::vector<Var> neg_vars(negatives.begin(), negatives.end());
  return push(std::move(out), inputs,
              [anchor, pos_vars, neg_vars, terms = std::move(terms)](Tape& t, std::int32_t self) {
                const T g = t.out_grad(self)(0, 0);
                if (t.needs_grad(anchor)) t.grad_of(anchor).row(0) += g * terms.d_anchor;
                for (std::size_t j = 0; j < pos_vars.size(); ++j) {
                  if (t.needs_grad(pos_vars[j])) t.grad_of(pos_vars[j]).row(0) += g * terms.d_positives[j];
                }
                for (std::size_t k = 0; k < neg_vars.size(); ++k) {
                  if (t.needs_grad(neg_vars[k])) t.grad_of(neg_vars[k]).row(0) += g * terms.d_negatives[k];
                }
              });
}

template <typename T>
void Tape<T>::backward(Var root) {
  if (value(root).size() != 1) throw std::invalid_argument("backward: root must be a scalar");
  if (!needs_grad(root)) return;
  grad_of(root)(0, 0) += T(1);
  for (std::int32_t i = root.index; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.has_grad || !n.backward) continue;
    n.backward(*this, i);
  }
}

template class ParameterSet<float>;
template class ParameterSet<double>;
template class Tape<float>;
template class Tape<double>;

}  // namespace faithgen::nn
