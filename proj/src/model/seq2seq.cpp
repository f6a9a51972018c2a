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

#include "faithgen/model/seq2seq.hpp"

#include <cmath>

#include "faithgen/common/error.hpp"
#include "faithgen/common/hash.hpp"

namespace faithgen::model {

using kg::Vocabulary;

template <typename T>
Seq2Seq<T>::Seq2Seq(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
  const int d = config_.hidden_dim;
  embedding_ = &params_.add("embedding", config_.vocab_size, d);
  for (int l = 0; l < config_.layers; ++l) {
    const std::string p = "encoder." + std::to_string(l) + ".";
    encoder_.push_back({make_norm(p + "norm1"), make_norm(p + "norm2"), make_attention(p + "self_attn"),
                        make_ffn(p + "ffn")});
  }
  encoder_norm_ = make_norm("encoder.norm");
  for (int l = 0; l < config_.layers; ++l) {
    const std::string p = "decoder." + std::to_string(l) + ".";
    decoder_.push_back({make_norm(p + "norm1"), make_norm(p + "norm2"), make_norm(p + "norm3"),
                        make_attention(p + "self_attn"), make_attention(p + "cross_attn"), make_ffn(p + "ffn")});
  }
  decoder_norm_ = make_norm("decoder.norm");
  output_bias_ = &params_.add("output_bias", 1, config_.vocab_size);

  const int rows = std::max(config_.max_source_length + 1, config_.max_target_length) + 1;
  positions_.resize(rows, d);
  for (int pos = 0; pos < rows; ++pos) {
    for (int i = 0; i < d; i += 2) {
      const double angle = pos / std::pow(10000.0, static_cast<double>(i) / d);
      positions_(pos, i) = static_cast<T>(std::sin(angle));
      if (i + 1 < d) positions_(pos, i + 1) = static_cast<T>(std::cos(angle));
    }
  }
  initialize();
  rng_.seed(mix_seed(config_.seed, 1));
}

template <typename T>
typename Seq2Seq<T>::Attention Seq2Seq<T>::make_attention(const std::string& prefix) {
  const int d = config_.hidden_dim;
  Attention a{};
  a.wq = &params_.add(prefix + ".wq", d, d);
  a.bq = &params_.add(prefix + ".bq", 1, d);
  a.wk = &params_.add(prefix + ".wk", d, d);
  a.bk = &params_.add(prefix + ".bk", 1, d);
  a.wv = &params_.add(prefix + ".wv", d, d);
  a.bv = &params_.add(prefix + ".bv", 1, d);
  a.wo = &params_.add(prefix + ".wo", d, d);
  a.bo = &params_.add(prefix + ".bo", 1, d);
  return a;
}

template <typename T>
typename Seq2Seq<T>::Norm Seq2Seq<T>::make_norm(const std::string& prefix) {
  return {&params_.add(prefix + ".gain", 1, config_.hidden_dim), &params_.add(prefix + ".bias", 1, config_.hidden_dim)};
}

template <typename T>
typename Seq2Seq<T>::FeedForward Seq2Seq<T>::make_ffn(const std::string& prefix) {
  const int d = config_.hidden_dim;
  const int f = config_.ffn_dim;
  return {&params_.add(prefix + ".w1", d, f), &params_.add(prefix + ".b1", 1, f), &params_.add(prefix + ".w2", f, d),
          &params_.add(prefix + ".b2", 1, d)};
}

template <typename T>
void Seq2Seq<T>::initialize() {
  std::mt19937_64 init_rng(mix_seed(config_.seed, 0));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    const std::string& name = p.name;
    if (name == "embedding") {
      std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(config_.hidden_dim)));
      for (Eigen::Index k = 0; k < p.value.size(); ++k) p.value.data()[k] = static_cast<T>(normal(init_rng));
    } else if (name.ends_with(".gain")) {
      p.value.setOnes();
    } else if (p.value.rows() > 1) {
      // Xavier-uniform for weight matrices.
      const double limit = std::sqrt(6.0 / static_cast<double>(p.value.rows() + p.value.cols()));
      std::uniform_real_distribution<double> uniform(-limit, limit);
      for (Eigen::Index k = 0; k < p.value.size(); ++k) p.value.data()[k] = static_cast<T>(uniform(init_rng));
    } else {
      p.value.setZero();
    }
  }
}

template <typename T>
void Seq2Seq<T>::check_vocab(std::span<const TokenId> ids) const {
  for (TokenId id : ids) {
    if (id < 0 || id >= config_.vocab_size) {
      throw Error("token id " + std::to_string(id) + " outside vocabulary of size " +
                  std::to_string(config_.vocab_size));
    }
  }
}

template <typename T>
void Seq2Seq<T>::check_source(std::span<const TokenId> source) const {
  if (source.empty()) throw Error("empty source sequence");
  if (source.size() > static_cast<std::size_t>(config_.max_source_length) + 1) {
    throw Error("source length " + std::to_string(source.size()) + " exceeds maximum " +
                std::to_string(config_.max_source_length) + " (+1 tag)");
  }
  check_vocab(source);
}

template <typename T>
std::vector<TokenId> Seq2Seq<T>::shift_right(std::span<const TokenId> target) const {
  if (target.empty()) throw Error("empty target sequence");
  if (target.size() > static_cast<std::size_t>(config_.max_target_length)) {
    throw Error("target length " + std::to_string(target.size()) + " exceeds maximum " +
                std::to_string(config_.max_target_length));
  }
  check_vocab(target);
  std::vector<TokenId> input;
  input.reserve(target.size());
  input.push_back(Vocabulary::kBos);
  input.insert(input.end(), target.begin(), target.end() - 1);
  return input;
}

template <typename T>
Var Seq2Seq<T>::embed(Tape<T>& tape, std::span<const TokenId> ids) {
  Var rows = tape.gather_rows(tape.param(*embedding_), ids);
  Var scaled = tape.scale(rows, static_cast<T>(std::sqrt(static_cast<double>(config_.hidden_dim))));
  Var pos = tape.constant(positions_.topRows(static_cast<Eigen::Index>(ids.size())));
  return residual_dropout(tape, tape.add(scaled, pos));
}

template <typename T>
Var Seq2Seq<T>::norm(Tape<T>& tape, const Norm& n, Var x) {
  return tape.layer_norm(x, tape.param(*n.gain), tape.param(*n.bias));
}

template <typename T>
Var Seq2Seq<T>::linear(Tape<T>& tape, Var x, nn::Parameter<T>* w, nn::Parameter<T>* b) {
  return tape.add_row(tape.matmul(x, tape.param(*w)), tape.param(*b));
}

template <typename T>
Var Seq2Seq<T>::residual_dropout(Tape<T>& tape, Var x) {
  return training_ ? tape.dropout(x, config_.dropout, rng_) : x;
}

template <typename T>
Var Seq2Seq<T>::attend(Tape<T>& tape, const Attention& a, Var queries, Var keys, Var values,
                       std::span<const std::uint8_t> key_valid, bool causal) {
  Var merged = tape.attention(queries, keys, values, config_.heads, key_valid, causal);
  return linear(tape, merged, a.wo, a.bo);
}

template <typename T>
Var Seq2Seq<T>::feed_forward(Tape<T>& tape, const FeedForward& f, Var x) {
  return linear(tape, tape.gelu(linear(tape, x, f.w1, f.b1)), f.w2, f.b2);
}

template <typename T>
typename Seq2Seq<T>::Encoded Seq2Seq<T>::encode(Tape<T>& tape, std::span<const TokenId> source) {
  check_source(source);
  Encoded out;
  out.key_valid.resize(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) out.key_valid[i] = source[i] != Vocabulary::kPad;

  Var x = embed(tape, source);
  for (const EncoderLayer& layer : encoder_) {
    Var h = norm(tape, layer.norm1, x);
    Var q = linear(tape, h, layer.self_attn.wq, layer.self_attn.bq);
    Var k = linear(tape, h, layer.self_attn.wk, layer.self_attn.bk);
    Var v = linear(tape, h, layer.self_attn.wv, layer.self_attn.bv);
    x = tape.add(x, residual_dropout(tape, attend(tape, layer.self_attn, q, k, v, out.key_valid, false)));
    x = tape.add(x, residual_dropout(tape, feed_forward(tape, layer.ffn, norm(tape, layer.norm2, x))));
  }
  out.memory = norm(tape, encoder_norm_, x);
  for (const DecoderLayer& layer : decoder_) {
    out.cross_keys.push_back(linear(tape, out.memory, layer.cross_attn.wk, layer.cross_attn.bk));
    out.cross_values.push_back(linear(tape, out.memory, layer.cross_attn.wv, layer.cross_attn.bv));
  }
  return out;
}

template <typename T>
Var Seq2Seq<T>::decode(Tape<T>& tape, const Encoded& encoded, std::span<const TokenId> decoder_input) {
  if (decoder_input.empty()) throw Error("empty decoder input");
  if (decoder_input.size() > static_cast<std::size_t>(config_.max_target_length)) {
    throw Error("decoder input exceeds maximum target length " + std::to_string(config_.max_target_length));
  }
  check_vocab(decoder_input);
  Mask self_valid(decoder_input.size());
  for (std::size_t i = 0; i < decoder_input.size(); ++i) self_valid[i] = decoder_input[i] != Vocabulary::kPad;

  Var x = embed(tape, decoder_input);
  for (std::size_t l = 0; l < decoder_.size(); ++l) {
    const DecoderLayer& layer = decoder_[l];
    Var h = norm(tape, layer.norm1, x);
    Var q = linear(tape, h, layer.self_attn.wq, layer.self_attn.bq);
    Var k = linear(tape, h, layer.self_attn.wk, layer.self_attn.bk);
    Var v = linear(tape, h, layer.self_attn.wv, layer.self_attn.bv);
    x = tape.add(x, residual_dropout(tape, attend(tape, layer.self_attn, q, k, v, self_valid, true)));
    Var hc = norm(tape, layer.norm2, x);
    Var qc = linear(tape, hc, layer.cross_attn.wq, layer.cross_attn.bq);
    x = tape.add(x, residual_dropout(tape, attend(tape, layer.cross_attn, qc, encoded.cross_keys[l],
                                                  encoded.cross_values[l], encoded.key_valid, false)));
    x = tape.add(x, residual_dropout(tape, feed_forward(tape, layer.ffn, norm(tape, layer.norm3, x))));
  }
  return norm(tape, decoder_norm_, x);
}

template <typename T>
Var Seq2Seq<T>::logits(Tape<T>& tape, Var hidden) {
  return tape.add_row(tape.matmul_nt(hidden, tape.param(*embedding_)), tape.param(*output_bias_));
}

template <typename T>
typename Seq2Seq<T>::Forward Seq2Seq<T>::encode_decode(std::span<const TokenId> source,
                                                      std::span<const TokenId> target) {
  Tape<T> tape;
  const Encoded enc = encode(tape, source);
  const std::vector<TokenId> input = shift_right(target);
  Var hidden = decode(tape, enc, input);
  Var out = logits(tape, hidden);
  return {tape.value(out), tape.value(hidden)};
}

template <typename T>
RowVector<T> Seq2Seq<T>::decoder_representation(std::span<const TokenId> source, std::span<const TokenId> text) {
  Mask keep(text.size());
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    keep[i] = text[i] != Vocabulary::kPad;
    any = any || keep[i];
  }
  if (!any) throw Error("decoder representation of an all-PAD text is undefined");
  Tape<T> tape;
  const Encoded enc = encode(tape, source);
  Var hidden = decode(tape, enc, shift_right(text));
  return tape.value(tape.masked_mean_rows(hidden, keep)).row(0);
}

template <typename T>
std::vector<double> Seq2Seq<T>::next_log_probs(const Encoded& encoded, Tape<T>& tape,
                                               std::span<const TokenId> prefix) {
  std::vector<TokenId> input;
  input.reserve(prefix.size() + 1);
  input.push_back(Vocabulary::kBos);
  input.insert(input.end(), prefix.begin(), prefix.end());
  Var hidden = decode(tape, encoded, input);
  const auto& h = tape.value(hidden);
  const Matrix<T> last = h.bottomRows(1);
  const Matrix<T> z = last * embedding_->value.transpose() + output_bias_->value;
  const double m = static_cast<double>(z.maxCoeff());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < z.cols(); ++j) sum += std::exp(static_cast<double>(z(0, j)) - m);
  const double log_z = m + std::log(sum);
  std::vector<double> out(static_cast<std::size_t>(z.cols()));
  for (Eigen::Index j = 0; j < z.cols(); ++j) out[static_cast<std::size_t>(j)] = static_cast<double>(z(0, j)) - log_z;
  return out;
}

template class Seq2Seq<float>;
template class Seq2Seq<double>;

}  // namespace faithgen::model
