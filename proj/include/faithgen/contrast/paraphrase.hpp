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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "faithgen/common/http.hpp"
#include "faithgen/kg/graph.hpp"

namespace faithgen::contrast {

struct ParaphraseRequest {
  std::string text;
  std::uint64_t seed = 0;
  /// Normalized tokens that must be neither replaced nor introduced
  /// (entity mentions). Remote paraphrasers may ignore this.
  std::set<std::string> protected_tokens;
};

/// A meaning-preserving rewrite of a reference text (e.g. round-trip
/// translation through a pivot language).
class Paraphraser {
 public:
  virtual ~Paraphraser() = default;
  virtual std::string name() const = 0;
  virtual std::string paraphrase(const ParaphraseRequest& request) = 0;
};

/// Deterministic offline paraphraser: seeded synonym substitution plus
/// sentence reordering. Output is normalized text, except that with an empty
/// synonym table and reordering disabled the input is returned verbatim.
class OfflineParaphraser final : public Paraphraser {
 public:
  struct Options {
    std::map<std::string, std::vector<std::string>> synonyms;
    bool reorder_clauses = true;
    double substitution_rate = 0.5;
  };

  OfflineParaphraser();  // default_synonyms(), reordering on
  explicit OfflineParaphraser(Options options);

  std::string name() const override { return "offline"; }
  std::string paraphrase(const ParaphraseRequest& request) override;

  static std::map<std::string, std::vector<std::string>> default_synonyms();

 private:
  Options options_;
};

/// Remote paraphrase service: POST {"text", "seed"} -> {"text"}.
class RemoteParaphraser final : public Paraphraser {
 public:
  explicit RemoteParaphraser(HttpEndpoint endpoint);
  std::string name() const override { return "remote"; }
  std::string paraphrase(const ParaphraseRequest& request) override;

 private:
  HttpEndpoint endpoint_;
};

/// Normalized tokens of every entity (head or tail) of the graph.
std::set<std::string> entity_tokens(const kg::KGGraph& graph);

/// `count` paraphrases of the anchor's reference, each from an independent
/// seed derived from (seed, anchor id, index). A paraphrase equal to the
/// normalized anchor is retried with fresh seeds a few times before being
/// accepted. Throws DataError if the anchor has no reference or count < 1;
/// paraphraser failures propagate as ServiceError.
std::vector<std::string> make_positives(const kg::TextSample& anchor, Paraphraser& paraphraser, int count,
                                        std::uint64_t seed);

}  // namespace faithgen::contrast
