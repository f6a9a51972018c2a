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

#include <map>
#include <set>

#include "doctest.h"
#include "faithgen/control/scorer.hpp"
#include "faithgen/eval/fact_eval.hpp"
#include "faithgen/kg/linearize.hpp"
#include "faithgen/synth/corpus.hpp"
#include "faithgen/synth/judge_fixture.hpp"

using namespace faithgen;

TEST_SUITE("synth") {
  TEST_CASE("house corpus frequency ranking is exact") {
    CHECK(synth::house_relations().size() == 68);
    const auto& salient = synth::house_salient_relations();
    REQUIRE(salient.size() == 10);
    CHECK(std::equal(salient.begin(), salient.end(), synth::house_relations().begin()));
    const auto corpus = synth::house_corpus(200, 1);
    CHECK(corpus.size() == 200);
    CHECK(eval::rank_salient_features(corpus, 10) == salient);
    std::map<std::string, std::size_t> counts;
    for (const auto& s : corpus) {
      CHECK(s.reference.has_value());
      CHECK(s.graph.entities().front().starts_with("house"));
      for (const auto& t : s.graph.triples()) ++counts[t.relation];
    }
    for (std::size_t i = 1; i < salient.size(); ++i) CHECK(counts[salient[i - 1]] > counts[salient[i]]);
    CHECK(counts[salient.back()] > counts["house_address"]);
  }

  TEST_CASE("house corpus is reproducible from its seed") {
    const auto a = synth::house_corpus(40, 3);
    const auto b = synth::house_corpus(40, 3);
    const auto c = synth::house_corpus(40, 4);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].graph == b[i].graph);
      CHECK(a[i].reference == b[i].reference);
      differs = differs || !(a[i].graph == c[i].graph);
    }
    CHECK(differs);
    CHECK(synth::house_corpus(20, 3, kg::Split::test).front().split == kg::Split::test);
  }

  TEST_CASE("steering corpus noise levels") {
    const auto corpus = synth::steering_corpus({});
    REQUIRE(corpus.size() == 2000);
    control::LexicalOverlapScorer scorer;
    std::map<synth::NoiseLevel, std::size_t> levels;
    for (const auto& s : corpus) {
      const auto n = s.sample.graph.size();
      CHECK(n >= 4);
      CHECK(n <= 8);
      ++levels[s.level];
      const double score = scorer.score(kg::linearize(s.sample.graph), *s.sample.reference);
      switch (s.level) {
        case synth::NoiseLevel::faithful:
          CHECK(s.injected_sentences == 0);
          CHECK(*s.sample.reference == synth::verbalize(s.sample.graph));
          CHECK(score == 1.0);
          break;
        case synth::NoiseLevel::medium:
          CHECK(s.injected_sentences >= 1);
          CHECK(s.injected_sentences <= 2);
          CHECK(score < 1.0);
          break;
        case synth::NoiseLevel::high:
          CHECK(s.injected_sentences >= 3);
          CHECK(s.injected_sentences <= 4);
          CHECK(score < 1.0);
          break;
      }
    }
    for (const auto& [level, count] : levels) {
      CHECK(count > 560);
      CHECK(count < 780);
    }
    synth::SteeringOptions small;
    small.samples = 30;
    small.min_triples = 2;
    small.max_triples = 3;
    for (const auto& s : synth::steering_corpus(small)) CHECK(s.sample.graph.size() <= 3);
  }

  TEST_CASE("injected sentences are unsupported by any graph") {
    control::LexicalOverlapScorer scorer;
    const auto lin = kg::linearize(synth::steering_corpus({}).front().sample.graph);
    for (const auto& sentence : synth::hallucination_sentences()) CHECK(scorer.score(lin, sentence) < 0.5);
  }

  TEST_CASE("judge fixture entries line up with their graphs") {
    const auto fx = synth::judge_fixture();
    REQUIRE(fx.samples.size() == 50);
    REQUIRE(fx.entries.size() == 50);
    std::size_t degenerate = 0, with_duplicates = 0, unparseable = 0;
    for (std::size_t i = 0; i < fx.entries.size(); ++i) {
      const auto& e = fx.entries[i];
      CHECK(e.id == fx.samples[i].id);
      CHECK(e.input == kg::linearize(fx.samples[i].graph).text);
      eval::FactSet input;
      for (const auto& f : e.input_facts) input.add(f);
      with_duplicates += input.size() < e.input_facts.size();
      CHECK(e.answers.size() == input.size());
      bool any_yes = false;
      for (const auto& a : e.answers) {
        CHECK(input.contains(a.fact));
        CHECK(a.included == eval::is_affirmative(a.reply));
        unparseable += !eval::is_yes_no(a.reply);
        any_yes = any_yes || a.included;
      }
      degenerate += !any_yes && e.extrinsic.empty() && e.intrinsic.empty();
    }
    CHECK(degenerate >= 2);
    CHECK(with_duplicates > 0);
    CHECK(unparseable > 0);
  }
}
