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

#include "faithgen/eval/judge.hpp"
#include "faithgen/model/config.hpp"
#include "faithgen/model/decode.hpp"
#include "faithgen/model/trainer.hpp"
#include "json.hpp"

namespace faithgen::pipeline {

struct DataConfig {
  std::filesystem::path train;
  std::filesystem::path valid;  // optional
  std::filesystem::path test;   // optional
};

struct SamplerConfig {
  int positives = 2;
  int negatives = 4;
  bool house_heuristic = true;
  /// "offline" or "remote".
  std::string paraphraser = "offline";
  bool reorder_clauses = true;
  double substitution_rate = 0.5;
  std::string paraphraser_endpoint;
  int paraphraser_timeout_ms = 30000;
};

struct ScorerConfig {
  /// "lexical-overlap" or "remote".
  std::string name = "lexical-overlap";
  std::filesystem::path stopwords;  // optional replacement stopword list
  int buckets = 3;
  std::string endpoint;
  std::string remote_name = "remote";
  int timeout_ms = 30000;
};

struct TrainingConfig {
  int epochs = 1;
  model::Precision precision = model::Precision::float64;
  model::Ablation ablation = model::Ablation::full;
  double contrastive_weight = 1.0;
  double temperature = 1.0;
  bool include_positive_in_denominator = false;
};

struct JudgeConfig {
  /// "mock" or "remote".
  std::string kind = "mock";
  std::filesystem::path fixture;    // optional mock answers
  std::filesystem::path templates;  // optional template directory
  bool fluency = true;
  eval::RemoteJudgeConfig remote;
};

struct EvalConfig {
  std::string split = "test";
  /// 0 evaluates every sample of the split.
  std::size_t max_samples = 50;
};

/// Everything a run needs. Relative paths in a config file are resolved
/// against the file's directory. The run seed replaces model.seed.
struct RunConfig {
  DataConfig data;
  std::uint64_t seed = 0;
  model::ModelConfig model;
  TrainingConfig training;
  SamplerConfig sampler;
  ScorerConfig scorer;
  JudgeConfig judge;
  model::DecodeOptions decode;
  EvalConfig eval;
  std::filesystem::path output_dir = "run";

  nlohmann::json to_json() const;
  /// Unknown keys and invalid values throw ConfigError.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  void validate() const;
  /// sha256 of the canonical JSON form.
  std::string hash() const;
};

}  // namespace faithgen::pipeline
