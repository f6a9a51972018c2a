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

#include "faithgen/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "faithgen/common/error.hpp"

namespace faithgen::model {

std::string to_string(Ablation a) {
  switch (a) {
    case Ablation::full: return "full";
    case Ablation::control_only: return "control-only";
    case Ablation::contrastive_only: return "contrastive-only";
    case Ablation::ce_only: return "ce-only";
  }
  return "full";
}

Ablation ablation_from_string(const std::string& name) {
  if (name == "full") return Ablation::full;
  if (name == "control-only") return Ablation::control_only;
  if (name == "contrastive-only") return Ablation::contrastive_only;
  if (name == "ce-only") return Ablation::ce_only;
  throw ConfigError("unknown ablation '" + name + "' (expected full, control-only, contrastive-only or ce-only)");
}

bool uses_contrastive(Ablation a) noexcept { return a == Ablation::full || a == Ablation::contrastive_only; }
bool uses_control_token(Ablation a) noexcept { return a == Ablation::full || a == Ablation::control_only; }

template <typename T>
Adam<T>::Adam(const nn::ParameterSet<T>& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_.push_back(Matrix<T>::Zero(params[i].value.rows(), params[i].value.cols()));
    v_.push_back(Matrix<T>::Zero(params[i].value.rows(), params[i].value.cols()));
  }
}

template <typename T>
void Adam<T>::step(nn::ParameterSet<T>& params, const TrainOptions& o) {
  ++t_;
  const T b1 = static_cast<T>(o.beta1);
  const T b2 = static_cast<T>(o.beta2);
  const T correction1 = static_cast<T>(1.0 - std::pow(o.beta1, static_cast<double>(t_)));
  const T correction2 = static_cast<T>(1.0 - std::pow(o.beta2, static_cast<double>(t_)));
  const T lr = static_cast<T>(o.learning_rate);
  const T eps = static_cast<T>(o.epsilon);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    m_[i] = b1 * m_[i] + (T(1) - b1) * p.grad;
    v_[i] = b2 * v_[i] + (T(1) - b2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= lr * (m_[i].array() / correction1) / ((v_[i].array() / correction2).sqrt() + eps);
  }
}

template <typename T>
Trainer<T>::Trainer(Seq2Seq<T>& model, TrainOptions options, std::uint64_t shuffle_seed)
    : model_(model), options_(options), adam_(model.parameters()), shuffle_rng_(shuffle_seed) {}

template <typename T>
void Trainer<T>::validate(const TrainExample& ex) const {
  if (uses_control_token(options_.ablation) && (ex.source.empty() || !is_tag_token(ex.source.front()))) {
    throw Error("example '" + ex.id + "': ablation " + to_string(options_.ablation) +
                " requires a hallucination tag at the start of the source");
  }
  if (uses_contrastive(options_.ablation) && (ex.positives.empty() || ex.negatives.empty())) {
    throw Error("example '" + ex.id + "': contrastive training needs positives and negatives");
  }
}

template <typename T>
LossBreakdown Trainer<T>::run(std::span<const TrainExample> batch, bool with_gradients) {
  if (with_gradients) model_.parameters().zero_grad();
  LossBreakdown out;
  const bool contrastive = uses_contrastive(options_.ablation);
  for (const TrainExample& ex : batch) {
    validate(ex);
    Tape<T> tape;
    auto enc = model_.encode(tape, ex.source);
    Var hidden = model_.decode(tape, enc, model_.shift_right(ex.target));
    Var ce = tape.cross_entropy_sum(model_.logits(tape, hidden), ex.target);
    Var loss = ce;
    double l_cl = 0.0;
    if (contrastive) {
      auto representation = [&](std::span<const TokenId> text) {
        Mask keep(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) keep[i] = text[i] != kg::Vocabulary::kPad;
        return tape.masked_mean_rows(model_.decode(tape, enc, model_.shift_right(text)), keep);
      };
      Mask keep(ex.target.size(), true);
      Var anchor = tape.masked_mean_rows(hidden, keep);
      std::vector<Var> pos, neg;
      for (const auto& p : ex.positives) pos.push_back(representation(p));
      for (const auto& n : ex.negatives) neg.push_back(representation(n));
      Var cl = tape.contrastive(anchor, pos, neg, options_.contrastive);
      if (options_.contrastive_weight != 1.0) cl = tape.scale(cl, static_cast<T>(options_.contrastive_weight));
      l_cl = static_cast<double>(tape.scalar(cl));
      loss = tape.add(ce, cl);
    }
    const double l_ce = static_cast<double>(tape.scalar(ce));
    if (!std::isfinite(l_ce) || !std::isfinite(l_cl)) {
      std::ostringstream msg;
      msg << "non-finite loss on example '" << ex.id << "' (l_ce=" << l_ce << ", l_cl=" << l_cl << ")";
      throw TrainingDiverged(msg.str());
    }
    out.l_ce += l_ce;
    out.l_cl += l_cl;
    out.tokens += static_cast<std::size_t>(
        std::count_if(ex.target.begin(), ex.target.end(), [](TokenId t) { return t != kg::Vocabulary::kPad; }));
    if (with_gradients) tape.backward(loss);
  }
  out.total = out.l_cl + out.l_ce;
  return out;
}

template <typename T>
LossBreakdown Trainer<T>::compute_gradients(std::span<const TrainExample> batch) {
  return run(batch, true);
}

template <typename T>
LossBreakdown Trainer<T>::evaluate_loss(std::span<const TrainExample> batch) {
  return run(batch, false);
}

template <typename T>
LossBreakdown Trainer<T>::train_step(std::span<const TrainExample> batch) {
  LossBreakdown loss = compute_gradients(batch);
  auto& params = model_.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].grad.allFinite()) {
      throw TrainingDiverged("non-finite gradient in parameter '" + params[i].name + "' at step " +
                             std::to_string(adam_.steps() + 1));
    }
  }
  adam_.step(params, options_);
  return loss;
}

template <typename T>
void Trainer<T>::run_epoch(std::span<const TrainExample> data, const std::function<void(const StepRecord&)>& on_step) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), shuffle_rng_);
  const auto batch_size = static_cast<std::size_t>(model_.config().batch_size);
  std::vector<TrainExample> batch;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    batch.clear();
    for (std::size_t i = start; i < std::min(order.size(), start + batch_size); ++i) batch.push_back(data[order[i]]);
    StepRecord record;
    record.loss = train_step(batch);
    record.step = adam_.steps();
    record.epoch = epoch_;
    if (on_step) on_step(record);
  }
  ++epoch_;
}

template class Adam<float>;
template class Adam<double>;
template class Trainer<float>;
template class Trainer<double>;

}  // namespace faithgen::model
