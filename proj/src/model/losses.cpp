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

#include "faithgen/model/losses.hpp"

#include <cmath>

#include "faithgen/common/error.hpp"

namespace faithgen::model {

double contrastive_loss(const RowVector<double>& anchor, std::span<const RowVector<double>> positives,
                        std::span<const RowVector<double>> negatives, const ContrastiveOptions& options) {
  return nn::contrastive_terms<double>(anchor, positives, negatives, options, false).loss;
}

template <typename T>
double sequence_nll(const Matrix<T>& logits, std::span<const TokenId> targets) {
  if (static_cast<Eigen::Index>(targets.size()) != logits.rows()) {
    throw Error("sequence_nll: " + std::to_string(targets.size()) + " targets for " +
                std::to_string(logits.rows()) + " logit rows");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const TokenId y = targets[static_cast<std::size_t>(i)];
    if (y == kg::Vocabulary::kPad) continue;
    const double m = static_cast<double>(logits.row(i).maxCoeff());
    double sum = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) sum += std::exp(static_cast<double>(logits(i, j)) - m);
    total -= static_cast<double>(logits(i, y)) - m - std::log(sum);
  }
  return total;
}

bool is_tag_token(TokenId id) noexcept {
  return id == kg::Vocabulary::kHalLow || id == kg::Vocabulary::kHalMedium || id == kg::Vocabulary::kHalHigh;
}

template <typename T>
double ce_loss_with_control(Seq2Seq<T>& model, std::span<const TokenId> tagged_source,
                            std::span<const TokenId> target) {
  if (tagged_source.empty() || !is_tag_token(tagged_source.front())) {
    throw Error("control-token cross-entropy requires a source starting with a hallucination tag");
  }
  const auto forward = model.encode_decode(tagged_source, target);
  return sequence_nll<T>(forward.logits, target);
}

template double sequence_nll<float>(const Matrix<float>&, std::span<const TokenId>);
template double sequence_nll<double>(const Matrix<double>&, std::span<const TokenId>);
template double ce_loss_with_control<float>(Seq2Seq<float>&, std::span<const TokenId>, std::span<const TokenId>);
template double ce_loss_with_control<double>(Seq2Seq<double>&, std::span<const TokenId>, std::span<const TokenId>);

}  // namespace faithgen::model
