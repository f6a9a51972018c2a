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

#include "faithgen/synth/judge_fixture.hpp"

#include <algorithm>
#include <random>

#include "faithgen/kg/linearize.hpp"
#include "faithgen/synth/corpus.hpp"

namespace faithgen::synth {

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string without_period(const std::string& s) { return s.ends_with(" .") ? s.substr(0, s.size() - 2) : s; }

}  // namespace

JudgeFixture judge_fixture(std::size_t samples, std::uint64_t seed) {
  JudgeFixture fx;
  fx.samples = house_corpus(std::max<std::size_t>(samples, 20), seed, kg::Split::test);
  fx.samples.resize(samples);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution included(0.6);
  std::bernoulli_distribution duplicate(0.15);
  const std::vector<std::string> yes = {"yes", "Yes.", "YES, the output mentions it.", "1. yes"};
  const std::vector<std::string> no = {"no", "No.", "no, it is not mentioned", "- No"};
  const std::vector<std::string> unclear = {"The output does not say.", "Possibly."};
  const auto& noise = hallucination_sentences();

  for (std::size_t i = 0; i < samples; ++i) {
    const auto& sample = fx.samples[i];
    const bool degenerate = i % 16 == 7;
    eval::JudgeFixtureEntry e;
    e.id = sample.id;
    e.input = kg::linearize(sample.graph).text;
    e.output = *sample.reference;
    for (const auto& t : sample.graph.triples()) {
      const std::string fact = t.relation + ": " + t.tail;
      e.input_facts.push_back(fact);
      if (duplicate(rng)) e.input_facts.push_back(upper(fact));
    }
    for (const auto& t : sample.graph.triples()) {
      eval::JudgeFixtureEntry::Answer a;
      a.fact = t.relation + ": " + t.tail;
      a.included = !degenerate && included(rng);
      if (a.included) {
        a.reply = yes[std::uniform_int_distribution<std::size_t>(0, yes.size() - 1)(rng)];
      } else if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) {
        a.reply = unclear[std::uniform_int_distribution<std::size_t>(0, unclear.size() - 1)(rng)];
      } else {
        a.reply = no[std::uniform_int_distribution<std::size_t>(0, no.size() - 1)(rng)];
      }
      e.answers.push_back(std::move(a));
    }
    if (!degenerate) {
      std::vector<std::string> pool = noise;
      std::shuffle(pool.begin(), pool.end(), rng);
      const int n_ext = std::uniform_int_distribution<int>(0, 3)(rng);
      for (int k = 0; k < n_ext; ++k) e.extrinsic.push_back(without_period(pool[static_cast<std::size_t>(k)]));
      const int n_int = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int k = 0; k < n_int; ++k) {
        e.intrinsic.push_back("bedrooms: " + std::to_string(7 + k));
      }
      if (!e.extrinsic.empty() && coin(rng)) e.intrinsic.push_back(upper(e.extrinsic.front()));
    }
    e.fluency = std::to_string(std::uniform_int_distribution<int>(2, 5)(rng));
    fx.entries.push_back(std::move(e));
  }
  return fx;
}

}  // namespace faithgen::synth
