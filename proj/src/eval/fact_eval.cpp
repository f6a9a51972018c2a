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

#include "faithgen/eval/fact_eval.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "faithgen/common/error.hpp"

namespace faithgen::eval {

nlohmann::json FactEvalResult::to_json() const {
  return {{"n_input", n_input},     {"n_common", n_common},   {"n_hallucinated", n_hallucinated},
          {"n_output", n_output},   {"precision", precision}, {"recall", recall},
          {"hallucination_rate", hallucination_rate}, {"degenerate", degenerate}};
}

FactEvalResult compute_prh(std::size_t n_input, std::size_t n_common, std::size_t n_hallucinated) {
  if (n_input == 0) throw DataError("recall is undefined for a sample with no input facts");
  if (n_common > n_input) throw DataError("more common facts than input facts");
  FactEvalResult r;
  r.n_input = n_input;
  r.n_common = n_common;
  r.n_hallucinated = n_hallucinated;
  r.n_output = n_common + n_hallucinated;
  r.recall = static_cast<double>(n_common) / static_cast<double>(n_input);
  if (r.n_output == 0) {
    r.degenerate = true;
  } else {
    r.precision = static_cast<double>(n_common) / static_cast<double>(r.n_output);
    r.hallucination_rate = static_cast<double>(n_hallucinated) / static_cast<double>(r.n_output);
  }
  return r;
}

nlohmann::json SalientEvalResult::to_json() const {
  return {{"salient", salient},
          {"n_salient_input", n_salient_input},
          {"n_salient_common", n_salient_common},
          {"n_output", n_output},
          {"precision", precision},
          {"recall", recall},
          {"precision_degenerate", precision_degenerate},
          {"recall_degenerate", recall_degenerate}};
}

SalientEvalResult compute_salient(const FactSet& input_facts, const FactSet& common_facts,
                                  std::span<const std::string> salient, std::size_t n_output) {
  std::set<std::string> types;
  for (const auto& s : salient) types.insert(fact_type(s));
  auto is_salient = [&](const std::string& fact) { return types.contains(fact_type(fact)); };
  SalientEvalResult r;
  r.salient.assign(salient.begin(), salient.end());
  r.n_salient_input = static_cast<std::size_t>(std::count_if(input_facts.begin(), input_facts.end(), is_salient));
  r.n_salient_common = static_cast<std::size_t>(std::count_if(common_facts.begin(), common_facts.end(), is_salient));
  r.n_output = n_output;
  if (n_output == 0) {
    r.precision_degenerate = true;
  } else {
    r.precision = static_cast<double>(r.n_salient_common) / static_cast<double>(n_output);
  }
  if (r.n_salient_input == 0) {
    r.recall_degenerate = true;
  } else {
    r.recall = static_cast<double>(r.n_salient_common) / static_cast<double>(r.n_salient_input);
  }
  return r;
}

std::vector<std::string> rank_salient_features(std::span<const kg::TextSample> train, std::size_t k) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : train) {
    for (const auto& t : s.graph.triples()) ++counts[t.relation];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() < k) {
    spdlog::warn("only {} distinct relation labels; returning all of them as salient features", ranked.size());
    k = ranked.size();
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].first);
  return out;
}

namespace {

std::string ask(JudgeClient& judge, const TemplateSet& templates, const char* template_id, const std::string& input,
                const std::string& output, const std::string& fact, JudgeExchange* record) {
  JudgePrompt prompt{template_id, input, output, fact, templates.render(template_id, input, output, fact)};
  std::string reply = judge.complete(prompt);
  if (record) *record = {template_id, fact, prompt.text, reply};
  return reply;
}

}  // namespace

FactSet enumerate_input_facts(const kg::LinearizedGraph& linearized, JudgeClient& judge, const TemplateSet& templates,
                              Transcript* transcript) {
  JudgeExchange record;
  const auto reply = ask(judge, templates, kTemplateInputFacts, linearized.text, "", "", &record);
  if (transcript) transcript->push_back(record);
  return parse_fact_list(reply);
}

FactSet common_facts(const FactSet& input_facts, const kg::LinearizedGraph& linearized, std::string_view output,
                     JudgeClient& judge, const TemplateSet& templates, const JudgeOptions& options,
                     Transcript* transcript) {
  if (input_facts.empty()) throw DataError("cannot count common facts without input facts");
  const std::string out(output);
  const auto& facts = input_facts.facts();
  std::vector<JudgeExchange> records(facts.size());
  const std::size_t window = static_cast<std::size_t>(std::max(1, options.max_in_flight));
  for (std::size_t start = 0; start < facts.size(); start += window) {
    const std::size_t stop = std::min(facts.size(), start + window);
    if (window == 1) {
      ask(judge, templates, kTemplateCommonFact, linearized.text, out, facts[start], &records[start]);
      continue;
    }
    std::vector<std::future<void>> inflight;
    for (std::size_t i = start; i < stop; ++i) {
      inflight.push_back(std::async(std::launch::async, [&, i] {
        ask(judge, templates, kTemplateCommonFact, linearized.text, out, facts[i], &records[i]);
      }));
    }
    for (auto& f : inflight) f.get();
  }
  FactSet common;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (!is_yes_no(records[i].response)) {
      spdlog::warn("unparseable judge reply for fact '{}' counted as no: {}", facts[i], records[i].response);
    }
    if (is_affirmative(records[i].response)) common.add(facts[i]);
    if (transcript) transcript->push_back(std::move(records[i]));
  }
  return common;
}

std::size_t count_common_facts(const FactSet& input_facts, const kg::LinearizedGraph& linearized,
                               std::string_view output, JudgeClient& judge, const TemplateSet& templates,
                               const JudgeOptions& options, Transcript* transcript) {
  return common_facts(input_facts, linearized, output, judge, templates, options, transcript).size();
}

FactSet enumerate_hallucinated_facts(const kg::LinearizedGraph& linearized, std::string_view output,
                                     JudgeClient& judge, const TemplateSet& templates, Transcript* transcript) {
  const std::string out(output);
  JudgeExchange extrinsic_record;
  JudgeExchange intrinsic_record;
  const auto extrinsic = ask(judge, templates, kTemplateExtrinsic, linearized.text, out, "", &extrinsic_record);
  const auto intrinsic = ask(judge, templates, kTemplateIntrinsic, linearized.text, out, "", &intrinsic_record);
  if (transcript) {
    transcript->push_back(extrinsic_record);
    transcript->push_back(intrinsic_record);
  }
  FactSet facts = parse_fact_list(extrinsic);
  facts.merge(parse_fact_list(intrinsic));
  return facts;
}

std::optional<int> parse_fluency(std::string_view response) {
  for (std::size_t i = 0; i < response.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(response[i]))) continue;
    std::size_t j = i;
    while (j < response.size() && std::isdigit(static_cast<unsigned char>(response[j]))) ++j;
    const int value = std::stoi(std::string(response.substr(i, j - i)));
    if (value >= 1 && value <= 5) return value;
    return std::nullopt;
  }
  return std::nullopt;
}

SampleEvaluation evaluate_sample(const std::string& sample_id, const kg::LinearizedGraph& linearized,
                                 std::string_view output, JudgeClient& judge, const TemplateSet& templates,
                                 std::span<const std::string> salient, const JudgeOptions& options) {
  SampleEvaluation e;
  e.sample_id = sample_id;
  e.transcript.sample_id = sample_id;
  e.transcript.judge = judge.name();
  e.transcript.input = linearized.text;
  e.transcript.output = std::string(output);
  auto& log = e.transcript.exchanges;
  e.input_facts = enumerate_input_facts(linearized, judge, templates, &log);
  if (e.input_facts.empty()) throw DataError("judge listed no input facts for sample '" + sample_id + "'");
  e.common = common_facts(e.input_facts, linearized, output, judge, templates, options, &log);
  e.hallucinated = enumerate_hallucinated_facts(linearized, output, judge, templates, &log);
  e.prh = compute_prh(e.input_facts.size(), e.common.size(), e.hallucinated.size());
  e.salient = compute_salient(e.input_facts, e.common, salient, e.prh.n_output);
  if (options.fluency) {
    JudgeExchange record;
    const auto reply = ask(judge, templates, kTemplateFluency, linearized.text, std::string(output), "", &record);
    log.push_back(record);
    e.fluency = parse_fluency(reply);
    if (!e.fluency) spdlog::warn("unparseable fluency rating for sample '{}': {}", sample_id, reply);
  }
  return e;
}

SampleEvaluation reparse_transcript(const JudgeTranscript& transcript, std::span<const std::string> salient) {
  SampleEvaluation e;
  e.sample_id = transcript.sample_id;
  e.transcript = transcript;
  bool have_input = false;
  for (const auto& x : transcript.exchanges) {
    if (x.template_id == kTemplateInputFacts) {
      e.input_facts = parse_fact_list(x.response);
      have_input = true;
    } else if (x.template_id == kTemplateCommonFact) {
      if (is_affirmative(x.response)) e.common.add(x.fact);
    } else if (x.template_id == kTemplateExtrinsic || x.template_id == kTemplateIntrinsic) {
      e.hallucinated.merge(parse_fact_list(x.response));
    } else if (x.template_id == kTemplateFluency) {
      e.fluency = parse_fluency(x.response);
    } else {
      throw DataError("transcript for '" + transcript.sample_id + "' has unknown template " + x.template_id);
    }
  }
  if (!have_input) throw DataError("transcript for '" + transcript.sample_id + "' has no input-fact query");
  e.prh = compute_prh(e.input_facts.size(), e.common.size(), e.hallucinated.size());
  e.salient = compute_salient(e.input_facts, e.common, salient, e.prh.n_output);
  return e;
}

}  // namespace faithgen::eval
