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

#include "faithgen/control/scorer.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include "faithgen/common/error.hpp"
#include "faithgen/kg/tokenize.hpp"

namespace faithgen::control {

LexicalOverlapScorer::LexicalOverlapScorer() : stopwords_(default_stopwords()) {}

LexicalOverlapScorer::LexicalOverlapScorer(std::set<std::string> stopwords) : stopwords_(std::move(stopwords)) {}

double LexicalOverlapScorer::score(const kg::LinearizedGraph& linearized, std::string_view text) {
  const auto graph_tokens_list = kg::split_source(linearized.text);
  const std::unordered_set<std::string> graph_tokens(graph_tokens_list.begin(), graph_tokens_list.end());
  std::size_t content = 0;
  std::size_t supported = 0;
  for (const std::string& tok : kg::split_text(text)) {
    if (kg::is_punctuation(tok) || stopwords_.contains(tok)) continue;
    ++content;
    if (graph_tokens.contains(tok)) ++supported;
  }
  if (content == 0) throw DataError("text has no content tokens; lexical overlap is undefined");
  return static_cast<double>(supported) / static_cast<double>(content);
}

std::set<std::string> LexicalOverlapScorer::default_stopwords() {
  return {"a",     "an",    "and",  "are",  "as",    "at",    "be",   "but",   "by",    "for",  "from",
          "has",   "have",  "in",   "into", "is",    "it",    "its",  "of",    "on",    "or",   "that",
          "the",   "their", "there", "this", "to",   "was",   "were", "which", "while", "with", "will",
          "also",  "all",   "can",  "features", "offers", "includes", "boasts", "comes", "located", "situated",
          "home",  "property", "here", "very", "some", "than", "then", "these", "those", "who", "our", "your"};
}

std::set<std::string> LexicalOverlapScorer::load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stopword list " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    for (const std::string& tok : kg::split_text(line)) words.insert(tok);
  }
  return words;
}

RemoteScorer::RemoteScorer(std::string name, HttpEndpoint endpoint)
    : name_(std::move(name)), endpoint_(std::move(endpoint)) {}

double RemoteScorer::score(const kg::LinearizedGraph& linearized, std::string_view text) {
  const auto response = post_json(endpoint_, {{"source", linearized.text}, {"text", std::string(text)}});
  const auto it = response.find("score");
  if (it == response.end() || !it->is_number()) {
    throw ServiceError("scorer '" + name_ + "' response lacks a numeric 'score': " + response.dump());
  }
  return it->get<double>();
}

FaithfulnessScore score_faithfulness(std::string sample_id, const kg::LinearizedGraph& linearized,
                                     std::string_view text, Scorer& scorer) {
  const double value = scorer.score(linearized, text);
  if (!std::isfinite(value)) {
    throw DataError("scorer '" + scorer.name() + "' returned a non-finite score for '" + sample_id + "'");
  }
  return {std::move(sample_id), value, scorer.name()};
}

}  // namespace faithgen::control
