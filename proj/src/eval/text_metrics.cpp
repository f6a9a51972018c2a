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

#include "faithgen/eval/text_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <spdlog/spdlog.h>

#include "faithgen/common/error.hpp"

namespace faithgen::eval {

namespace {

struct NgramStats {
  std::array<std::size_t, 4> matched{};
  std::array<std::size_t, 4> total{};
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;
};

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(std::span<const std::string> tokens, std::size_t n) {
  std::map<Ngram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

void accumulate(NgramStats& s, std::span<const std::string> candidate, std::span<const std::string> reference) {
  s.candidate_length += candidate.size();
  s.reference_length += reference.size();
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto c = ngram_counts(candidate, n);
    const auto r = ngram_counts(reference, n);
    for (const auto& [gram, count] : c) {
      s.total[n - 1] += count;
      const auto it = r.find(gram);
      if (it != r.end()) s.matched[n - 1] += std::min(count, it->second);
    }
  }
}

double score(const NgramStats& s) {
  if (s.candidate_length == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    if (s.matched[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(s.matched[n]) / static_cast<double>(s.total[n]));
  }
  const double c = static_cast<double>(s.candidate_length);
  const double r = static_cast<double>(s.reference_length);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / 4.0);
}

}  // namespace

double bleu4(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty()) {
    spdlog::warn("BLEU of an empty candidate is 0");
    return 0.0;
  }
  NgramStats s;
  accumulate(s, candidate, reference);
  return score(s);
}

double corpus_bleu4(std::span<const Tokens> candidates, std::span<const Tokens> references) {
  if (candidates.size() != references.size()) throw DataError("corpus BLEU needs one reference per candidate");
  NgramStats s;
  for (std::size_t i = 0; i < candidates.size(); ++i) accumulate(s, candidates[i], references[i]);
  return score(s);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const double lcs = static_cast<double>(lcs_length(candidate, reference));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

}  // namespace faithgen::eval
