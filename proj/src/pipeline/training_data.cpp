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

#include "faithgen/pipeline/training_data.hpp"

#include <map>

#include <spdlog/spdlog.h>

#include "faithgen/common/error.hpp"
#include "faithgen/control/tags.hpp"
#include "faithgen/kg/dataset.hpp"
#include "faithgen/kg/linearize.hpp"

namespace faithgen::pipeline {

using kg::TokenId;
using kg::Vocabulary;

kg::Vocabulary build_training_vocabulary(std::span<const kg::TextSample> samples,
                                         std::span<const contrast::ContrastiveSet> sets) {
  Vocabulary vocab = kg::build_vocabulary(samples);
  for (const auto& set : sets) {
    for (const auto& text : set.positives) {
      for (const auto& tok : kg::split_text(text)) vocab.add(tok);
    }
    for (const auto& neg : set.negatives) {
      for (const auto& tok : kg::split_text(neg.text)) vocab.add(tok);
    }
  }
  return vocab;
}

std::vector<TokenId> encode_text(std::string_view text, const Vocabulary& vocab, std::size_t max_length) {
  if (max_length < 1) throw ConfigError("max target length must be positive");
  auto ids = kg::tokenize(text, vocab);
  if (ids.size() + 1 > max_length) ids.resize(max_length - 1);
  ids.push_back(Vocabulary::kEos);
  return ids;
}

std::vector<model::TrainExample> build_train_examples(std::span<const kg::TextSample> samples,
                                                      const control::BucketAssignment* buckets,
                                                      std::span<const contrast::ContrastiveSet> sets,
                                                      const Vocabulary& vocab, const ExampleOptions& options) {
  const bool tagged = model::uses_control_token(options.ablation);
  const bool contrastive = model::uses_contrastive(options.ablation);
  if (tagged && buckets == nullptr) {
    throw DataError("ablation " + model::to_string(options.ablation) + " needs bucket assignments");
  }
  std::map<std::string, const contrast::ContrastiveSet*> by_anchor;
  for (const auto& set : sets) by_anchor[set.anchor_id] = &set;

  std::vector<model::TrainExample> out;
  std::size_t truncated = 0;
  for (const auto& sample : samples) {
    if (!sample.reference) continue;
    model::TrainExample ex;
    ex.id = sample.id;
    const auto linearized = kg::linearize(sample.graph, options.max_source_tokens);
    const std::string source =
        tagged ? control::apply_control_token(linearized, buckets->tag_of(sample.id)) : linearized.text;
    ex.source = kg::tokenize_source(source, vocab);
    if (kg::tokenize(*sample.reference, vocab).size() + 1 > options.max_target_length) ++truncated;
    ex.target = encode_text(*sample.reference, vocab, options.max_target_length);
    if (contrastive) {
      const auto it = by_anchor.find(sample.id);
      if (it == by_anchor.end()) throw DataError("no contrastive set for sample '" + sample.id + "'");
      for (const auto& p : it->second->positives) {
        ex.positives.push_back(encode_text(p, vocab, options.max_target_length));
      }
      for (const auto& n : it->second->negatives) {
        ex.negatives.push_back(encode_text(n.text, vocab, options.max_target_length));
      }
    }
    out.push_back(std::move(ex));
  }
  if (truncated > 0) {
    spdlog::warn("{} reference(s) exceed {} target tokens and were truncated", truncated, options.max_target_length);
  }
  return out;
}

}  // namespace faithgen::pipeline
