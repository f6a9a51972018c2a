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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "faithgen/common/error.hpp"
#include "faithgen/control/buckets.hpp"
#include "faithgen/control/scorer.hpp"
#include "faithgen/control/tags.hpp"
#include "support.hpp"

using namespace faithgen;
using control::HallucinationTag;

namespace {

std::vector<control::FaithfulnessScore> scores_of(std::initializer_list<std::pair<const char*, double>> items) {
  std::vector<control::FaithfulnessScore> out;
  for (const auto& [id, s] : items) out.push_back({id, s, "lexical-overlap"});
  return out;
}

}  // namespace

TEST_SUITE("control") {
  TEST_CASE("tag names, tokens and ids agree") {
    CHECK(control::tag_name(HallucinationTag::low) == "hal_low");
    CHECK(control::tag_token(HallucinationTag::medium) == "<hal_medium>");
    CHECK(control::tag_token_id(HallucinationTag::high) == kg::Vocabulary::kHalHigh);
    for (auto tag : control::kAllTags) {
      CHECK(control::tag_from_string(control::tag_name(tag)) == tag);
      CHECK(control::tag_from_string(control::tag_token(tag)) == tag);
      CHECK(kg::Vocabulary().token(control::tag_token_id(tag)) == control::tag_token(tag));
    }
    CHECK_THROWS_AS(control::tag_from_string("hal_extreme"), ConfigError);
  }

  TEST_CASE("control token prefixes the linearization and parses back") {
    const auto g = kg::KGGraph::from_triples({{"house", "bedrooms", "3"}});
    const auto lin = kg::linearize(g);
    const auto tagged = control::apply_control_token(lin, HallucinationTag::high);
    CHECK(tagged == "<hal_high> <H> house <R> bedrooms <T> 3");
    const auto parsed = control::parse_tagged_source(tagged);
    CHECK(parsed.tag == HallucinationTag::high);
    CHECK(parsed.graph == g);
    CHECK_THROWS_AS(control::parse_tagged_source(lin.text), ParseError);
    CHECK_THROWS_AS(control::parse_tagged_source("<hal_low> <H> house"), ParseError);
  }

  TEST_CASE("lexical overlap counts supported content tokens") {
    control::LexicalOverlapScorer scorer;
    const auto lin = kg::linearize(kg::KGGraph::from_triples({{"house", "bedrooms", "3"}}));
    CHECK(scorer.score(lin, "The house has 3 bedrooms and a pool.") == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(scorer.score(lin, "house , 3 bedrooms .") == 1.0);
    CHECK(scorer.score(lin, "a garden") == 0.0);
    CHECK_THROWS_AS(scorer.score(lin, "the . , and"), DataError);
    CHECK(scorer.name() == "lexical-overlap");
  }

  TEST_CASE("stopword lists load from files") {
    testing::TempDir dir;
    std::ofstream(dir / "stop.txt") << "# comment\nthe\n\n  pool  \n";
    const auto words = control::LexicalOverlapScorer::load_stopwords(dir / "stop.txt");
    CHECK(words == std::set<std::string>{"the", "pool"});
    control::LexicalOverlapScorer scorer(words);
    const auto lin = kg::linearize(kg::KGGraph::from_triples({{"house", "r", "t"}}));
    CHECK(scorer.score(lin, "the house pool") == 1.0);
    CHECK_THROWS_AS(control::LexicalOverlapScorer::load_stopwords(dir / "missing.txt"), ConfigError);
  }

  TEST_CASE("buckets split 3q+r samples with the first r buckets larger") {
    for (std::size_t n = 3; n <= 12; ++n) {
      std::vector<control::FaithfulnessScore> scores;
      for (std::size_t i = 0; i < n; ++i) scores.push_back({"s" + std::to_string(i), double(i) / n, "x"});
      const auto a = control::assign_buckets(scores);
      const std::size_t q = n / 3, r = n % 3;
      for (std::size_t b = 0; b < 3; ++b) CHECK(a.sizes[b] == q + (b < r ? 1 : 0));
    }
  }

  TEST_CASE("high scores go to hal_low and ties break by id") {
    const auto a = control::assign_buckets(
        scores_of({{"e", 0.5}, {"a", 0.9}, {"d", 0.5}, {"b", 0.1}, {"c", 0.5}, {"f", 0.2}, {"g", 0.95}}));
    std::vector<std::string> order;
    for (const auto& e : a.entries) order.push_back(e.id);
    CHECK(order == std::vector<std::string>{"g", "a", "c", "d", "e", "f", "b"});
    CHECK(a.tag_of("g") == HallucinationTag::low);
    CHECK(a.tag_of("c") == HallucinationTag::low);
    CHECK(a.tag_of("d") == HallucinationTag::medium);
    CHECK(a.tag_of("e") == HallucinationTag::medium);
    CHECK(a.tag_of("b") == HallucinationTag::high);
    CHECK(a.ranges[0] == std::pair{0.95, 0.5});
    CHECK(a.ranges[2] == std::pair{0.2, 0.1});
    CHECK_THROWS_AS(a.at("zz"), DataError);
  }

  TEST_CASE("bucketing is independent of input order") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> level(0, 4);
    std::vector<control::FaithfulnessScore> scores;
    for (int i = 0; i < 40; ++i) scores.push_back({"id" + std::to_string(i), level(rng) / 4.0, "x"});
    const auto a = control::assign_buckets(scores);
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(scores.begin(), scores.end(), rng);
      const auto b = control::assign_buckets(scores);
      REQUIRE(b.entries.size() == a.entries.size());
      for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(b.entries[i].id == a.entries[i].id);
        CHECK(b.entries[i].tag == a.entries[i].tag);
      }
    }
  }

  TEST_CASE("invalid score sets are rejected") {
    CHECK_THROWS_AS(control::assign_buckets(scores_of({{"a", 1}, {"b", 0}})), DataError);
    CHECK_THROWS_AS(control::assign_buckets(scores_of({{"a", 1}, {"a", 0}, {"c", 0.5}})), DataError);
    CHECK_THROWS_AS(control::assign_buckets(scores_of({{"a", 1}, {"b", std::nan("")}, {"c", 0.5}})), DataError);
    auto mixed = scores_of({{"a", 1}, {"b", 0}, {"c", 0.5}});
    mixed[1].scorer_name = "other";
    CHECK_THROWS_AS(control::assign_buckets(mixed), DataError);
  }

  TEST_CASE("bucket files round-trip") {
    const auto a = control::assign_buckets(scores_of({{"a", 0.9}, {"b", 0.4}, {"c", 0.4}, {"d", 0.0}}));
    testing::TempDir dir;
    control::write_bucket_file(dir / "buckets.jsonl", a);
    const auto b = control::read_bucket_file(dir / "buckets.jsonl");
    CHECK(b.scorer == a.scorer);
    CHECK(b.sizes == a.sizes);
    CHECK(b.ranges == a.ranges);
    for (const auto& e : a.entries) {
      CHECK(b.at(e.id).score == e.score);
      CHECK(b.tag_of(e.id) == e.tag);
    }
    CHECK(a.summary()["buckets"][0]["size"] == 2);
    CHECK(a.summary()["buckets"][2]["tag"] == "hal_high");
  }

  TEST_CASE("score_faithfulness rejects non-finite scorer output") {
    struct Broken : control::Scorer {
      std::string name() const override { return "broken"; }
      double score(const kg::LinearizedGraph&, std::string_view) override { return std::nan(""); }
    } broken;
    const auto lin = kg::linearize(kg::KGGraph::from_triples({{"h", "r", "t"}}));
    CHECK_THROWS_AS(control::score_faithfulness("x", lin, "t", broken), DataError);
  }
}
