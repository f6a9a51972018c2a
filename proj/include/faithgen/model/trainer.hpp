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

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "faithgen/model/losses.hpp"
#include "faithgen/model/seq2seq.hpp"
#include "json.hpp"

namespace faithgen::model {

/// Training objective configurations. `full` is contrastive + tagged
/// cross-entropy; `ce_only` is the plain fine-tuning baseline.
enum class Ablation { full, control_only, contrastive_only, ce_only };

std::string to_string(Ablation a);
Ablation ablation_from_string(const std::string& name);
bool uses_contrastive(Ablation a) noexcept;
bool uses_control_token(Ablation a) noexcept;

struct TrainOptions {
  Ablation ablation = Ablation::full;
  double learning_rate = 3e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Weight on the contrastive term; the reported l_cl already includes it.
  double contrastive_weight = 1.0;
  ContrastiveOptions contrastive;
};

/// One anchor with its source (tag-prefixed when the ablation uses control
/// tokens), target (ending in EOS) and contrastive texts, all as token ids.
struct TrainExample {
  std::string id;
  std::vector<TokenId> source;
  std::vector<TokenId> target;
  std::vector<std::vector<TokenId>> positives;
  std::vector<std::vector<TokenId>> negatives;
};

struct LossBreakdown {
  double l_cl = 0.0;
  double l_ce = 0.0;
  double total = 0.0;
  std::size_t tokens = 0;

  double ce_per_token() const noexcept { return tokens ? l_ce / static_cast<double>(tokens) : 0.0; }
};

/// Raised when a loss becomes NaN or infinite; the message names the batch.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
class Adam {
 public:
  Adam() = default;
  explicit Adam(const nn::ParameterSet<T>& params);

  void step(nn::ParameterSet<T>& params, const TrainOptions& options);

  std::int64_t steps() const noexcept { return t_; }
  std::vector<Matrix<T>>& first_moments() noexcept { return m_; }
  std::vector<Matrix<T>>& second_moments() noexcept { return v_; }
  void set_steps(std::int64_t t) noexcept { t_ = t; }

 private:
  std::vector<Matrix<T>> m_;
  std::vector<Matrix<T>> v_;
  std::int64_t t_ = 0;
};

struct StepRecord {
  std::int64_t step = 0;
  int epoch = 0;
  LossBreakdown loss;
};

template <typename T>
class Trainer {
 public:
  Trainer(Seq2Seq<T>& model, TrainOptions options, std::uint64_t shuffle_seed);

  /// Forward and backward over `batch`; parameter gradients are overwritten.
  LossBreakdown compute_gradients(std::span<const TrainExample> batch);

  /// Forward only; L = l_cl + l_ce under the current mode.
  LossBreakdown evaluate_loss(std::span<const TrainExample> batch);

  /// compute_gradients, a finiteness check, then one Adam update.
  LossBreakdown train_step(std::span<const TrainExample> batch);

  /// Shuffles `data` with the trainer's RNG and runs one pass in batches of
  /// model.config().batch_size, reporting every step.
  void run_epoch(std::span<const TrainExample> data, const std::function<void(const StepRecord&)>& on_step);

  const TrainOptions& options() const noexcept { return options_; }
  Adam<T>& optimizer() noexcept { return adam_; }
  std::mt19937_64& shuffle_rng() noexcept { return shuffle_rng_; }
  int epoch() const noexcept { return epoch_; }
  void set_epoch(int e) noexcept { epoch_ = e; }

 private:
  LossBreakdown run(std::span<const TrainExample> batch, bool with_gradients);
  void validate(const TrainExample& ex) const;

  Seq2Seq<T>& model_;
  TrainOptions options_;
  Adam<T> adam_;
  std::mt19937_64 shuffle_rng_;
  int epoch_ = 0;
};

extern template class Adam<float>;
extern template class Adam<double>;
extern template class Trainer<float>;
extern template class Trainer<double>;

}  // namespace faithgen::model
