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

#include "faithgen/eval/facts.hpp"
#include "faithgen/eval/judge.hpp"
#include "faithgen/kg/graph.hpp"
#include "faithgen/kg/linearize.hpp"
#include "json.hpp"

namespace faithgen::eval {

struct FactEvalResult {
  std::size_t n_input = 0;
  std::size_t n_common = 0;
  std::size_t n_hallucinated = 0;
  std::size_t n_output = 0;
  double precision = 0.0;
  double recall = 0.0;
  double hallucination_rate = 0.0;
  /// n_output == 0: precision and hallucination rate are reported as 0.
  bool degenerate = false;

  nlohmann::json to_json() const;
};

/// Throws DataError when n_input is 0 or n_common exceeds n_input.
FactEvalResult compute_prh(std::size_t n_input, std::size_t n_common, std::size_t n_hallucinated);

struct SalientEvalResult {
  std::vector<std::string> salient;
  std::size_t n_salient_input = 0;
  std::size_t n_salient_common = 0;
  std::size_t n_output = 0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;

  nlohmann::json to_json() const;
};

/// Salient precision = salient common facts / output facts; salient recall =
/// salient common facts / salient input facts. A fact is salient when its
/// type (see fact_type) is one of the salient relation labels.
SalientEvalResult compute_salient(const FactSet& input_facts, const FactSet& common_facts,
                                  std::span<const std::string> salient, std::size_t n_output);

/// Relation labels by descending triple count, ties by label; the top k.
std::vector<std::string> rank_salient_features(std::span<const kg::TextSample> train, std::size_t k = 10);

struct JudgeOptions {
  /// Concurrent Template-2 queries.
  int max_in_flight = 1;
  bool fluency = true;
};

/// Transcript sink; exchanges are appended in the canonical order.
using Transcript = std::vector<JudgeExchange>;

FactSet enumerate_input_facts(const kg::LinearizedGraph& linearized, JudgeClient& judge, const TemplateSet& templates,
                              Transcript* transcript = nullptr);

/// Input facts the judge says are in the output, in input order. Throws
/// DataError on an empty fact set.
FactSet common_facts(const FactSet& input_facts, const kg::LinearizedGraph& linearized, std::string_view output,
                     JudgeClient& judge, const TemplateSet& templates, const JudgeOptions& options = {},
                     Transcript* transcript = nullptr);

std::size_t count_common_facts(const FactSet& input_facts, const kg::LinearizedGraph& linearized,
                               std::string_view output, JudgeClient& judge, const TemplateSet& templates,
                               const JudgeOptions& options = {}, Transcript* transcript = nullptr);

/// Union of the extrinsic ("not mentioned") and intrinsic ("contradictory")
/// lists.
FactSet enumerate_hallucinated_facts(const kg::LinearizedGraph& linearized, std::string_view output,
                                     JudgeClient& judge, const TemplateSet& templates,
                                     Transcript* transcript = nullptr);

/// First integer 1..5 in the reply, if any.
std::optional<int> parse_fluency(std::string_view response);

struct SampleEvaluation {
  std::string sample_id;
  FactSet input_facts;
  FactSet common;
  FactSet hallucinated;
  FactEvalResult prh;
  SalientEvalResult salient;
  std::optional<int> fluency;
  JudgeTranscript transcript;
};

/// Runs every judge query for one sample and records the transcript.
SampleEvaluation evaluate_sample(const std::string& sample_id, const kg::LinearizedGraph& linearized,
                                 std::string_view output, JudgeClient& judge, const TemplateSet& templates,
                                 std::span<const std::string> salient, const JudgeOptions& options = {});

/// Recomputes the evaluation by re-parsing the stored responses only.
SampleEvaluation reparse_transcript(const JudgeTranscript& transcript, std::span<const std::string> salient);

}  // namespace faithgen::eval
