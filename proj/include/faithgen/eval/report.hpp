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
#include <span>
#include <string>
#include <vector>

#include "faithgen/eval/fact_eval.hpp"
#include "json.hpp"

namespace faithgen::eval {

struct SampleReport {
  std::string id;
  FactEvalResult prh;
  SalientEvalResult salient;
  double bleu = 0.0;
  double rouge_l = 0.0;
  std::optional<int> fluency;

  nlohmann::json to_json() const;
};

/// Corpus averages. P, H and salient P average over samples whose output
/// fact count is non-zero; R over all samples; salient R over samples with
/// salient input facts. BLEU is corpus-level, ROUGE-L the sample mean.
struct CorpusReport {
  std::size_t samples = 0;
  std::size_t degenerate = 0;
  double avg_precision = 0.0;
  double avg_recall = 0.0;
  double avg_hallucination = 0.0;
  double avg_salient_precision = 0.0;
  double avg_salient_recall = 0.0;
  double bleu = 0.0;
  double rouge_l = 0.0;
  std::optional<double> fluency;

  nlohmann::json to_json() const;
};

CorpusReport aggregate(std::span<const SampleReport> samples, double corpus_bleu);

/// Per-sample rows plus reserved (empty) METEOR, FactCC and BARTScore columns.
void write_sample_csv(const std::filesystem::path& path, std::span<const SampleReport> samples);

}  // namespace faithgen::eval
