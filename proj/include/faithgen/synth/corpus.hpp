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
#include <string>
#include <vector>

#include "faithgen/kg/graph.hpp"

namespace faithgen::synth {

/// Relation labels of the House-style fixture: 68 labels, the first ten in
/// strictly decreasing frequency order.
const std::vector<std::string>& house_relations();

/// The ten most frequent relation labels of the House-style fixture.
const std::vector<std::string>& house_salient_relations();

/// House-style listings: every graph is rooted at one house entity, features
/// follow fixed per-relation occurrence counts (so the frequency ranking is
/// exact), and references mix verbalized triples with unsupported sentences.
std::vector<kg::TextSample> house_corpus(std::size_t samples, std::uint64_t seed,
                                         kg::Split split = kg::Split::train);

enum class NoiseLevel { faithful, medium, high };

struct SteeringSample {
  kg::TextSample sample;
  NoiseLevel level = NoiseLevel::faithful;
  int injected_sentences = 0;
};

struct SteeringOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = 7;
  int min_triples = 4;
  int max_triples = 8;
};

/// Graphs of min..max triples whose reference is the faithful verbalization
/// (probability 1/3), or has 1-2 (medium) or 3-4 (high) unsupported sentences
/// inserted at random sentence boundaries.
std::vector<SteeringSample> steering_corpus(const SteeringOptions& options);

/// The faithful verbalization used by steering_corpus.
std::string verbalize(const kg::KGGraph& graph);

/// The pool of unsupported sentences injected into noisy references.
const std::vector<std::string>& hallucination_sentences();

}  // namespace faithgen::synth
