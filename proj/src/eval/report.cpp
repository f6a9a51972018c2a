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

#include "faithgen/eval/report.hpp"

#include <fstream>

#include "faithgen/common/error.hpp"

namespace faithgen::eval {

nlohmann::json SampleReport::to_json() const {
  nlohmann::json j = {{"id", id}, {"prh", prh.to_json()}, {"salient", salient.to_json()}, {"bleu", bleu},
                      {"rouge_l", rouge_l}};
  j["fluency"] = fluency ? nlohmann::json(*fluency) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json CorpusReport::to_json() const {
  nlohmann::json j = {{"samples", samples},
                      {"degenerate", degenerate},
                      {"avg_precision", avg_precision},
                      {"avg_recall", avg_recall},
                      {"avg_hallucination", avg_hallucination},
                      {"avg_salient_precision", avg_salient_precision},
                      {"avg_salient_recall", avg_salient_recall},
                      {"bleu", bleu},
                      {"rouge_l", rouge_l},
                      {"meteor", nullptr},
                      {"factcc", nullptr},
                      {"bartscore", nullptr}};
  j["fluency"] = fluency ? nlohmann::json(*fluency) : nlohmann::json(nullptr);
  return j;
}

CorpusReport aggregate(std::span<const SampleReport> samples, double corpus_bleu) {
  CorpusReport r;
  r.samples = samples.size();
  r.bleu = corpus_bleu;
  std::size_t with_output = 0, with_salient = 0, rated = 0;
  double fluency_sum = 0.0;
  for (const auto& s : samples) {
    r.avg_recall += s.prh.recall;
    r.rouge_l += s.rouge_l;
    if (s.prh.degenerate) {
      ++r.degenerate;
    } else {
      ++with_output;
      r.avg_precision += s.prh.precision;
      r.avg_hallucination += s.prh.hallucination_rate;
      r.avg_salient_precision += s.salient.precision;
    }
    if (!s.salient.recall_degenerate) {
      ++with_salient;
      r.avg_salient_recall += s.salient.recall;
    }
    if (s.fluency) {
      ++rated;
      fluency_sum += *s.fluency;
    }
  }
  auto mean = [](double sum, std::size_t n) { return n ? sum / static_cast<double>(n) : 0.0; };
  r.avg_recall = mean(r.avg_recall, samples.size());
  r.rouge_l = mean(r.rouge_l, samples.size());
  r.avg_precision = mean(r.avg_precision, with_output);
  r.avg_hallucination = mean(r.avg_hallucination, with_output);
  r.avg_salient_precision = mean(r.avg_salient_precision, with_output);
  r.avg_salient_recall = mean(r.avg_salient_recall, with_salient);
  if (rated) r.fluency = fluency_sum / static_cast<double>(rated);
  return r;
}

void write_sample_csv(const std::filesystem::path& path, std::span<const SampleReport> samples) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,n_input,n_common,n_hallucinated,n_output,precision,recall,hallucination,degenerate,"
         "salient_precision,salient_recall,bleu,rouge_l,fluency,meteor,factcc,bartscore\n";
  out.precision(17);
  for (const auto& s : samples) {
    std::string id = s.id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : id) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      id = quoted + "\"";
    }
    out << id << ',' << s.prh.n_input << ',' << s.prh.n_common << ',' << s.prh.n_hallucinated << ','
        << s.prh.n_output << ',' << s.prh.precision << ',' << s.prh.recall << ',' << s.prh.hallucination_rate << ','
        << (s.prh.degenerate ? 1 : 0) << ',' << s.salient.precision << ',' << s.salient.recall << ',' << s.bleu
        << ',' << s.rouge_l << ',';
    if (s.fluency) out << *s.fluency;
    out << ",,,\n";
  }
}

}  // namespace faithgen::eval
