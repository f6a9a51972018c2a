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

#include "faithgen/contrast/paraphrase.hpp"

#include <algorithm>
#include <random>

#include "faithgen/common/error.hpp"
#include "faithgen/common/hash.hpp"
#include "faithgen/kg/tokenize.hpp"

namespace faithgen::contrast {

namespace {

bool ends_sentence(const std::string& tok) { return tok == "." || tok == "!" || tok == "?" || tok == ";"; }

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace

OfflineParaphraser::OfflineParaphraser() : OfflineParaphraser(Options{default_synonyms(), true, 0.5}) {}

OfflineParaphraser::OfflineParaphraser(Options options) : options_(std::move(options)) {}

std::map<std::string, std::vector<std::string>> OfflineParaphraser::default_synonyms() {
  return {{"has", {"features", "offers", "includes"}},
          {"features", {"has", "offers", "includes"}},
          {"offers", {"has", "features", "includes"}},
          {"includes", {"has", "features", "offers"}},
          {"located", {"situated", "set"}},
          {"situated", {"located", "set"}},
          {"near", {"close to", "near to"}},
          {"close", {"near"}},
          {"spacious", {"roomy", "generous"}},
          {"large", {"big", "generous"}},
          {"big", {"large"}},
          {"house", {"home", "property"}},
          {"home", {"house", "property"}},
          {"property", {"house", "home"}},
          {"great", {"excellent", "fantastic"}},
          {"beautiful", {"lovely", "stunning"}},
          {"quiet", {"peaceful", "tranquil"}},
          {"modern", {"contemporary", "updated"}}};
}

std::string OfflineParaphraser::paraphrase(const ParaphraseRequest& request) {
  if (options_.synonyms.empty() && !options_.reorder_clauses) return request.text;
  std::mt19937_64 rng(request.seed);

  const auto tokens = kg::split_text(request.text);
  std::vector<std::vector<std::string>> sentences(1);
  for (const auto& tok : tokens) {
    sentences.back().push_back(tok);
    if (ends_sentence(tok)) sentences.emplace_back();
  }
  if (sentences.back().empty()) sentences.pop_back();
  if (options_.reorder_clauses && sentences.size() > 1) std::shuffle(sentences.begin(), sentences.end(), rng);

  std::bernoulli_distribution substitute(options_.substitution_rate);
  std::vector<std::string> out;
  for (const auto& sentence : sentences) {
    for (const auto& tok : sentence) {
      auto it = options_.synonyms.find(tok);
      if (it == options_.synonyms.end() || request.protected_tokens.contains(tok) || !substitute(rng)) {
        out.push_back(tok);
        continue;
      }
      std::vector<std::vector<std::string>> choices;
      for (const auto& syn : it->second) {
        auto syn_tokens = kg::split_text(syn);
        const bool clashes = std::any_of(syn_tokens.begin(), syn_tokens.end(),
                                         [&](const std::string& s) { return request.protected_tokens.contains(s); });
        if (!clashes && !syn_tokens.empty()) choices.push_back(std::move(syn_tokens));
      }
      if (choices.empty()) {
        out.push_back(tok);
        continue;
      }
      std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
      const auto& chosen = choices[pick(rng)];
      out.insert(out.end(), chosen.begin(), chosen.end());
    }
  }
  return join(out);
}

RemoteParaphraser::RemoteParaphraser(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::string RemoteParaphraser::paraphrase(const ParaphraseRequest& request) {
  const auto response = post_json(endpoint_, {{"text", request.text}, {"seed", request.seed}});
  const auto it = response.find("text");
  if (it == response.end() || !it->is_string()) {
    throw ServiceError("paraphraser response lacks a string 'text': " + response.dump());
  }
  return it->get<std::string>();
}

std::set<std::string> entity_tokens(const kg::KGGraph& graph) {
  std::set<std::string> out;
  for (const auto& e : graph.entities()) {
    for (auto& tok : kg::split_text(e)) out.insert(std::move(tok));
  }
  return out;
}

std::vector<std::string> make_positives(const kg::TextSample& anchor, Paraphraser& paraphraser, int count,
                                        std::uint64_t seed) {
  if (!anchor.reference) throw DataError("anchor '" + anchor.id + "' has no reference text");
  if (count < 1) throw DataError("positive count must be >= 1");
  constexpr int kAttempts = 8;
  const std::string normalized_anchor = kg::normalize_text(*anchor.reference);
  const std::uint64_t anchor_seed = mix_seed(seed, fnv1a64(anchor.id));

  ParaphraseRequest request;
  request.text = *anchor.reference;
  request.protected_tokens = entity_tokens(anchor.graph);
  std::vector<std::string> positives;
  for (int j = 0; j < count; ++j) {
    std::string candidate;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      request.seed = mix_seed(anchor_seed, static_cast<std::uint64_t>(j * kAttempts + attempt));
      candidate = paraphraser.paraphrase(request);
      if (kg::normalize_text(candidate) != normalized_anchor) break;
    }
    positives.push_back(std::move(candidate));
  }
  return positives;
}

}  // namespace faithgen::contrast
