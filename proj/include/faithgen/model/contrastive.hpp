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
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "faithgen/model/tape.hpp"

namespace faithgen::nn {

template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

template <typename T>
struct ContrastiveTerms {
  T loss = T(0);
  RowVector<T> d_anchor;
  std::vector<RowVector<T>> d_positives;
  std::vector<RowVector<T>> d_negatives;
};

/// Contrastive objective over decoder representations:
///
///   L = - sum_j log( exp(s_j) / sum_k exp(t_k) )
///   s_j = cos(anchor, positive_j) / temperature
///   t_k = cos(anchor, negative_k) / temperature
///
/// The denominator runs over negatives only unless
/// include_positive_in_denominator adds exp(s_j) to it (InfoNCE form).
/// Gradients with respect to every input vector are filled when requested.
/// Throws std::invalid_argument on empty sets, mismatched sizes or zero norms;
/// non-finite inputs give a NaN loss.
template <typename T>
ContrastiveTerms<T> contrastive_terms(const RowVector<T>& anchor,
                                      std::span<const RowVector<T>> positives,
                                      std::span<const RowVector<T>> negatives,
                                      const ContrastiveOptions& options, bool with_gradients) {
  if (positives.empty() || negatives.empty()) {
    throw std::invalid_argument("contrastive loss needs at least one positive and one negative");
  }
  if (!(options.temperature > 0)) throw std::invalid_argument("contrastive temperature must be positive");
  const auto dim = anchor.size();
  bool finite = true;
  auto check = [&](const RowVector<T>& v) {
    if (v.size() != dim) throw std::invalid_argument("contrastive loss: representation size mismatch");
    if (!v.allFinite()) {
      finite = false;
      return;
    }
    if (!(v.norm() > T(0))) throw std::invalid_argument("contrastive loss: zero-norm representation");
  };
  check(anchor);
  for (const auto& v : positives) check(v);
  for (const auto& v : negatives) check(v);
  if (!finite) {
    // Non-finite inputs yield a NaN loss so the caller's divergence check fires.
    ContrastiveTerms<T> nan_terms;
    nan_terms.loss = std::numeric_limits<T>::quiet_NaN();
    if (with_gradients) {
      nan_terms.d_anchor = RowVector<T>::Zero(dim);
      nan_terms.d_positives.assign(positives.size(), RowVector<T>::Zero(dim));
      nan_terms.d_negatives.assign(negatives.size(), RowVector<T>::Zero(dim));
    }
    return nan_terms;
  }

  const T inv_temp = T(1) / static_cast<T>(options.temperature);
  const T anchor_norm = anchor.norm();
  auto cosine = [&](const RowVector<T>& v) { return anchor.dot(v) / (anchor_norm * v.norm()); };

  std::vector<T> s(positives.size()), t(negatives.size());
  for (std::size_t j = 0; j < positives.size(); ++j) s[j] = cosine(positives[j]) * inv_temp;
  for (std::size_t k = 0; k < negatives.size(); ++k) t[k] = cosine(negatives[k]) * inv_temp;

  // log of the negative-only partition, shifted for stability.
  const T t_max = *std::max_element(t.begin(), t.end());
  T neg_sum = T(0);
  for (T tk : t) neg_sum += std::exp(tk - t_max);

  ContrastiveTerms<T> out;
  std::vector<T> d_s(positives.size());
  std::vector<T> d_t(negatives.size(), T(0));
  for (std::size_t j = 0; j < positives.size(); ++j) {
    T log_denominator;
    T pos_share = T(0);
    if (options.include_positive_in_denominator) {
      const T m = std::max(t_max, s[j]);
      const T total = neg_sum * std::exp(t_max - m) + std::exp(s[j] - m);
      log_denominator = m + std::log(total);
      pos_share = std::exp(s[j] - log_denominator);
    } else {
      log_denominator = t_max + std::log(neg_sum);
    }
    out.loss += log_denominator - s[j];
    d_s[j] = pos_share - T(1);
    for (std::size_t k = 0; k < negatives.size(); ++k) d_t[k] += std::exp(t[k] - log_denominator);
  }
  if (!with_gradients) return out;

  // d cos(a, v) / d a = v / (|a||v|) - cos * a / |a|^2, symmetric for v.
  out.d_anchor = RowVector<T>::Zero(dim);
  auto accumulate = [&](const RowVector<T>& v, T d_score, RowVector<T>& d_v) {
    const T v_norm = v.norm();
    const T c = anchor.dot(v) / (anchor_norm * v_norm);
    const T d_cos = d_score * inv_temp;
    out.d_anchor += d_cos * (v / (anchor_norm * v_norm) - c * anchor / (anchor_norm * anchor_norm));
    d_v = d_cos * (anchor / (anchor_norm * v_norm) - c * v / (v_norm * v_norm));
  };
  out.d_positives.resize(positives.size());
  out.d_negatives.resize(negatives.size());
  for (std::size_t j = 0; j < positives.size(); ++j) accumulate(positives[j], d_s[j], out.d_positives[j]);
  for (std::size_t k = 0; k < negatives.size(); ++k) accumulate(negatives[k], d_t[k], out.d_negatives[k]);
  return out;
}

}  // namespace faithgen::nn
