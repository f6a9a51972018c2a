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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faithgen/control/tags.hpp"
#include "faithgen/kg/graph.hpp"
#include "faithgen/kg/tokenize.hpp"
#include "faithgen/model/seq2seq.hpp"
#include "json.hpp"

namespace faithgen::model {

enum class DecodeStrategy { greedy, beam };

struct DecodeOptions {
  DecodeStrategy strategy = DecodeStrategy::greedy;
  int beam_width = 4;
  /// 0 means the model's max_target_length.
  std::size_t max_length = 0;
  /// Linearization budget in tokens; set from the model config, not serialized.
  std::size_t max_source_tokens = 600;

  nlohmann::json to_json() const;
  static DecodeOptions from_json(const nlohmann::json& j);
};

struct DecodingResult {
  /// Generated ids, ending in EOS when decoding finished before the limit.
  std::vector<TokenId> tokens;
  /// log P(token_t | prefix, source) for each entry of tokens.
  std::vector<double> log_probs;
  std::optional<control::HallucinationTag> tag;
  bool finished = false;

  double total_log_prob() const noexcept;
};

/// Argmax at every step; ties go to the lowest token id. PAD, BOS and the
/// control tags are never emitted.
template <typename T>
DecodingResult decode_greedy(Seq2Seq<T>& model, std::span<const TokenId> source, std::size_t max_length = 0);

/// Highest cumulative log-probability hypothesis among the completed ones;
/// ties go to the shorter, then lexicographically smaller, sequence. Width 1
/// reproduces greedy decoding.
template <typename T>
DecodingResult decode_beam(Seq2Seq<T>& model, std::span<const TokenId> source, int width,
                           std::size_t max_length = 0);

/// Model input for a graph: the tag token (if any) followed by the
/// linearized graph, as ids.
std::vector<TokenId> generation_source(const kg::KGGraph& graph, std::optional<control::HallucinationTag> tag,
                                       const kg::Vocabulary& vocab, std::size_t max_source_tokens = 600);

template <typename T>
DecodingResult generate(Seq2Seq<T>& model, const kg::Vocabulary& vocab, const kg::KGGraph& graph,
                        std::optional<control::HallucinationTag> tag, const DecodeOptions& options = {});

}  // namespace faithgen::model
