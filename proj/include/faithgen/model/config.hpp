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
#include <string>

#include "json.hpp"

namespace faithgen::model {

/// Architecture and optimization settings. Defaults follow the fine-tuning
/// contract of the original system: 600 source tokens, 128 target tokens,
/// batch 32, Adam at 3e-5.
struct ModelConfig {
  int vocab_size = 0;
  int embedding_dim = 128;
  int hidden_dim = 128;
  int ffn_dim = 256;
  int layers = 2;
  int heads = 4;
  double dropout = 0.1;
  int max_source_length = 600;
  int max_target_length = 128;
  double learning_rate = 3e-5;
  int batch_size = 32;
  std::uint64_t seed = 0;

  /// Throws ConfigError on non-positive sizes or incompatible dimensions.
  void validate() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static ModelConfig from_json(const nlohmann::json& j);
};

enum class Precision { float32, float64 };

std::string to_string(Precision p);
Precision precision_from_string(const std::string& name);

}  // namespace faithgen::model
