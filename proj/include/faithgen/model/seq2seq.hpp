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
#include <random>
#include <span>
#include <vector>

#include "faithgen/kg/tokenize.hpp"
#include "faithgen/model/config.hpp"
#include "faithgen/model/contrastive.hpp"
#include "faithgen/model/tape.hpp"

namespace faithgen::model {

using kg::TokenId;
using nn::Mask;
using nn::Matrix;
using nn::RowVector;
using nn::Tape;
using nn::Var;

/// Pre-LN transformer encoder-decoder with tied input/output embeddings and
/// sinusoidal positions. Sources may be one token longer than
/// max_source_length to leave room for a hallucination tag.
template <typename T>
class Seq2Seq {
 public:
  explicit Seq2Seq(ModelConfig config);

  const ModelConfig& config() const noexcept { return config_; }
  nn::ParameterSet<T>& parameters() noexcept { return params_; }
  const nn::ParameterSet<T>& parameters() const noexcept { return params_; }

  /// Dropout is only active in training mode.
  void set_training(bool training) noexcept { training_ = training; }
  bool training() const noexcept { return training_; }
  std::mt19937_64& rng() noexcept { return rng_; }

  /// Encoder output plus per-decoder-layer cross-attention keys and values,
  /// computed once and shared by every decoder pass over the same source.
  struct Encoded {
    Var memory;
    Mask key_valid;
    std::vector<Var> cross_keys;
    std::vector<Var> cross_values;
  };

  Encoded encode(Tape<T>& tape, std::span<const TokenId> source);

  /// Final-layer (post final layer norm) decoder states, one row per input
  /// position. PAD positions are excluded as attention keys.
  Var decode(Tape<T>& tape, const Encoded& encoded, std::span<const TokenId> decoder_input);

  Var logits(Tape<T>& tape, Var hidden);

  struct Forward {
    Matrix<T> logits;  // target length x vocab
    Matrix<T> hidden;  // target length x hidden dim
  };

  /// Teacher-forced pass: row i is conditioned on BOS, target[0..i-1].
  Forward encode_decode(std::span<const TokenId> source, std::span<const TokenId> target);

  /// Mean of final-layer decoder states over non-PAD positions of `text`.
  RowVector<T> decoder_representation(std::span<const TokenId> source, std::span<const TokenId> text);

  /// log P(. | prefix, source) for the next position after `prefix`
  /// (which excludes BOS).
  std::vector<double> next_log_probs(const Encoded& encoded, Tape<T>& tape, std::span<const TokenId> prefix);

  /// BOS followed by target[0..n-2]; checks lengths.
  std::vector<TokenId> shift_right(std::span<const TokenId> target) const;
  void check_source(std::span<const TokenId> source) const;

 private:
  struct Attention {
    nn::Parameter<T>*wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
  };
  struct Norm {
    nn::Parameter<T>*gain, *bias;
  };
  struct FeedForward {
    nn::Parameter<T>*w1, *b1, *w2, *b2;
  };
  struct EncoderLayer {
    Norm norm1, norm2;
    Attention self_attn;
    FeedForward ffn;
  };
  struct DecoderLayer {
    Norm norm1, norm2, norm3;
    Attention self_attn, cross_attn;
    FeedForward ffn;
  };

  Attention make_attention(const std::string& prefix);
  Norm make_norm(const std::string& prefix);
  FeedForward make_ffn(const std::string& prefix);
  void initialize();

  Var embed(Tape<T>& tape, std::span<const TokenId> ids);
  Var norm(Tape<T>& tape, const Norm& n, Var x);
  Var linear(Tape<T>& tape, Var x, nn::Parameter<T>* w, nn::Parameter<T>* b);
  Var attend(Tape<T>& tape, const Attention& a, Var queries, Var keys, Var values,
             std::span<const std::uint8_t> key_valid, bool causal);
  Var feed_forward(Tape<T>& tape, const FeedForward& f, Var x);
  Var residual_dropout(Tape<T>& tape, Var x);
  void check_vocab(std::span<const TokenId> ids) const;

  ModelConfig config_;
  nn::ParameterSet<T> params_;
  nn::Parameter<T>* embedding_ = nullptr;
  nn::Parameter<T>* output_bias_ = nullptr;
  std::vector<EncoderLayer> encoder_;
  std::vector<DecoderLayer> decoder_;
  Norm encoder_norm_{};
  Norm decoder_norm_{};
  Matrix<T> positions_;
  bool training_ = false;
  std::mt19937_64 rng_;
};

extern template class Seq2Seq<float>;
extern template class Seq2Seq<double>;

}  // namespace faithgen::model
