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
#include <string_view>
#include <vector>

#include "faithgen/contrast/sampling.hpp"
#include "faithgen/control/buckets.hpp"
#include "faithgen/kg/graph.hpp"
#include "faithgen/kg/tokenize.hpp"
#include "faithgen/model/trainer.hpp"

namespace faithgen::pipeline {

struct ExampleOptions {
  model::Ablation ablation = model::Ablation::full;
  std::size_t max_source_tokens = 600;
  std::size_t max_target_length = 128;
};

/// Vocabulary over the graphs and references of `samples` plus every
/// positive and negative text in `sets`.
kg::Vocabulary build_training_vocabulary(std::span<const kg::TextSample> samples,
                                         std::span<const contrast::ContrastiveSet> sets);

/// Text ids followed by EOS, cut to at most `max_length` ids (EOS kept).
std::vector<kg::TokenId> encode_text(std::string_view text, const kg::Vocabulary& vocab, std::size_t max_length);

/// One example per sample with a reference. The source carries the sample's
/// bucket tag when the ablation uses control tokens; positives and negatives
/// come from the sample's contrastive set when the ablation is contrastive.
/// Throws DataError when a required bucket entry or contrastive set is missing.
std::vector<model::TrainExample> build_train_examples(std::span<const kg::TextSample> samples,
                                                      const control::BucketAssignment* buckets,
                                                      std::span<const contrast::ContrastiveSet> sets,
                                                      const kg::Vocabulary& vocab, const ExampleOptions& options);

}  // namespace faithgen::pipeline
