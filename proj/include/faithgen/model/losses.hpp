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

#include <span>
#include <vector>

#include "faithgen/model/contrastive.hpp"
#include "faithgen/model/seq2seq.hpp"

namespace faithgen::model {

using nn::ContrastiveOptions;

/// Contrastive loss over plain vectors. Throws std::invalid_argument on a
/// zero-norm vector or empty positive/negative sets.
double contrastive_loss(const RowVector<double>& anchor, std::span<const RowVector<double>> positives,
                        std::span<const RowVector<double>> negatives, const ContrastiveOptions& options = {});

/// Summed negative log-likelihood of `targets` under row-wise softmax of
/// `logits`; PAD targets are skipped.
template <typename T>
double sequence_nll(const Matrix<T>& logits, std::span<const TokenId> targets);

/// True if `id` is one of the three hallucination tag tokens.
bool is_tag_token(TokenId id) noexcept;

/// Teacher-forced cross-entropy of `target` given a tag-prefixed source.
/// Throws Error if the source does not start with a hallucination tag.
template <typename T>
double ce_loss_with_control(Seq2Seq<T>& model, std::span<const TokenId> tagged_source,
                            std::span<const TokenId> target);

}  // namespace faithgen::model
