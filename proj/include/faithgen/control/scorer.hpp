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
#include <set>
#include <string>
#include <string_view>

#include "faithgen/common/http.hpp"
#include "faithgen/kg/linearize.hpp"

namespace faithgen::control {

struct FaithfulnessScore {
  std::string sample_id;
  double score = 0.0;  // higher = more faithful; scale depends on the scorer
  std::string scorer_name;
};

/// Faithfulness of a reference text to a linearized graph.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  virtual double score(const kg::LinearizedGraph& linearized, std::string_view text) = 0;
};

/// Fraction of the text's content-token occurrences (tokens that are neither
/// stopwords nor punctuation) that also occur among the graph's tokens.
/// Range [0, 1]; 1 iff every content token is supported by the graph.
class LexicalOverlapScorer final : public Scorer {
 public:
  LexicalOverlapScorer();  // default_stopwords()
  explicit LexicalOverlapScorer(std::set<std::string> stopwords);

  std::string name() const override { return "lexical-overlap"; }
  /// Throws DataError if the text has no content tokens.
  double score(const kg::LinearizedGraph& linearized, std::string_view text) override;

  const std::set<std::string>& stopwords() const noexcept { return stopwords_; }

  static std::set<std::string> default_stopwords();
  /// One stopword per line; blank lines and '#' comments skipped.
  static std::set<std::string> load_stopwords(const std::filesystem::path& path);

 private:
  std::set<std::string> stopwords_;
};

/// Adapter for a model-based scorer (e.g. BARTScore) served over HTTP:
/// POST {"source": linearized, "text": text} -> {"score": number}.
class RemoteScorer final : public Scorer {
 public:
  RemoteScorer(std::string name, HttpEndpoint endpoint);

  std::string name() const override { return name_; }
  double score(const kg::LinearizedGraph& linearized, std::string_view text) override;

 private:
  std::string name_;
  HttpEndpoint endpoint_;
};

/// Scores one sample. Throws DataError if the scorer returns a non-finite value.
FaithfulnessScore score_faithfulness(std::string sample_id, const kg::LinearizedGraph& linearized,
                                     std::string_view text, Scorer& scorer);

}  // namespace faithgen::control
