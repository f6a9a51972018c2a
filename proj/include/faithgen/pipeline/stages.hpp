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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "faithgen/control/tags.hpp"
#include "faithgen/model/trainer.hpp"
#include "faithgen/pipeline/config.hpp"
#include "json.hpp"

namespace faithgen::pipeline {

/// Command-line overrides for a single stage invocation.
struct StageOptions {
  std::optional<model::Ablation> ablation;
  std::optional<control::HallucinationTag> tag;
  std::optional<std::string> judge;
  /// Continue training from the stage's last checkpoint.
  bool resume = false;
  /// Rerun even when the manifest says the stage is up to date.
  bool force = false;
  /// Stop training after this many epochs without completing the stage.
  std::optional<int> stop_after_epoch;
};

struct StageResult {
  std::string stage;
  bool skipped = false;
  std::vector<std::filesystem::path> outputs;
  nlohmann::json summary = nlohmann::json::object();
};

/// Stage ids as recorded in the manifest.
std::string train_stage_id(model::Ablation ablation);
std::string generate_stage_id(model::Ablation ablation, std::optional<control::HallucinationTag> tag);
std::string evaluate_stage_id(model::Ablation ablation, std::optional<control::HallucinationTag> tag,
                              const std::string& judge);

/// Validates the datasets and writes the vocabulary and per-split statistics.
StageResult run_prepare(const RunConfig& config, const StageOptions& options = {});
/// Positives and negatives for every training sample with a reference.
StageResult run_contrast(const RunConfig& config, const StageOptions& options = {});
/// Faithfulness scores and hallucination buckets of the training set.
StageResult run_bucket(const RunConfig& config, const StageOptions& options = {});
/// Trains one ablation; checkpoints after every epoch.
StageResult run_train(const RunConfig& config, const StageOptions& options = {});
/// Decodes the evaluation split with the trained model.
StageResult run_generate(const RunConfig& config, const StageOptions& options = {});
/// Judge-based P/R/H, salient metrics, BLEU-4 and ROUGE-L of the generations.
StageResult run_evaluate(const RunConfig& config, const StageOptions& options = {});

/// Merges every evaluation report of `run_dirs` into comparison.csv,
/// comparison.json and a P/R/H bar chart (prh.svg) under `out_dir`.
StageResult run_report(const std::vector<std::filesystem::path>& run_dirs, const std::filesystem::path& out_dir);

}  // namespace faithgen::pipeline
