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
#include <filesystem>
#include <string>

#include "faithgen/model/config.hpp"
#include "faithgen/model/seq2seq.hpp"
#include "faithgen/model/trainer.hpp"
#include "json.hpp"

namespace faithgen::model {

/// Everything in a checkpoint except the tensors.
struct CheckpointHeader {
  ModelConfig config;
  Precision precision = Precision::float64;
  std::string vocab_hash;
  bool has_optimizer = false;
  std::int64_t adam_steps = 0;
  int epoch = 0;
  std::string model_rng;
  std::string shuffle_rng;
  /// Free-form run metadata (ablation, options, ...).
  nlohmann::json metadata = nlohmann::json::object();
};

/// Binary layout: the 8-byte magic "FGCKPT01", a little-endian u64 header
/// length, the JSON header, then raw parameter tensors in registration order
/// followed (when a trainer is given) by Adam's first and second moments.
template <typename T>
void save_checkpoint(const std::filesystem::path& path, Seq2Seq<T>& model, Trainer<T>* trainer,
                     const std::string& vocab_hash, const nlohmann::json& metadata = nlohmann::json::object());

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path);

/// Restores parameters and RNG state into `model` (and optimizer state into
/// `trainer`, if given). The model must have been built from the header's
/// config; throws DataError on any mismatch or truncation.
template <typename T>
CheckpointHeader load_checkpoint(const std::filesystem::path& path, Seq2Seq<T>& model, Trainer<T>* trainer);

}  // namespace faithgen::model
