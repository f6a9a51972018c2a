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

#include "faithgen/model/config.hpp"

#include <set>

#include "faithgen/common/error.hpp"

namespace faithgen::model {

void ModelConfig::validate() const {
  auto positive = [](const char* name, double v) {
    if (!(v > 0)) throw ConfigError(std::string("model.") + name + " must be > 0");
  };
  positive("vocab_size", vocab_size);
  positive("embedding_dim", embedding_dim);
  positive("hidden_dim", hidden_dim);
  positive("ffn_dim", ffn_dim);
  positive("layers", layers);
  positive("heads", heads);
  positive("max_source_length", max_source_length);
  positive("max_target_length", max_target_length);
  positive("learning_rate", learning_rate);
  positive("batch_size", batch_size);
  if (embedding_dim != hidden_dim) {
    throw ConfigError("model.embedding_dim must equal model.hidden_dim (tied embeddings)");
  }
  if (hidden_dim % heads != 0) throw ConfigError("model.hidden_dim must be divisible by model.heads");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("model.dropout must be in [0, 1)");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"vocab_size", vocab_size},
          {"embedding_dim", embedding_dim},
          {"hidden_dim", hidden_dim},
          {"ffn_dim", ffn_dim},
          {"layers", layers},
          {"heads", heads},
          {"dropout", dropout},
          {"max_source_length", max_source_length},
          {"max_target_length", max_target_length},
          {"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"seed", seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {
      "vocab_size", "embedding_dim", "hidden_dim", "ffn_dim", "layers", "heads", "dropout",
      "max_source_length", "max_target_length", "learning_rate", "batch_size", "seed"};
  if (!j.is_object()) throw ConfigError("model config must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("unknown model config key '" + key + "'");
  }
  ModelConfig c;
  try {
    c.vocab_size = j.value("vocab_size", c.vocab_size);
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    c.ffn_dim = j.value("ffn_dim", c.ffn_dim);
    c.layers = j.value("layers", c.layers);
    c.heads = j.value("heads", c.heads);
    c.dropout = j.value("dropout", c.dropout);
    c.max_source_length = j.value("max_source_length", c.max_source_length);
    c.max_target_length = j.value("max_target_length", c.max_target_length);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
  return c;
}

std::string to_string(Precision p) { return p == Precision::float32 ? "float32" : "float64"; }

Precision precision_from_string(const std::string& name) {
  if (name == "float32") return Precision::float32;
  if (name == "float64") return Precision::float64;
  throw ConfigError("unknown precision '" + name + "' (expected float32 or float64)");
}

}  // namespace faithgen::model
