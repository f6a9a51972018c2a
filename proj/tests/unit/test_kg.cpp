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

#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "faithgen/common/error.hpp"
#include "faithgen/kg/dataset.hpp"
#include "faithgen/kg/linearize.hpp"
#include "faithgen/kg/tokenize.hpp"
#include "support.hpp"

using namespace faithgen;
using faithgen::testing::TempDir;

namespace {

kg::KGGraph two_triples() {
  return kg::KGGraph::from_triples({{"house 1", "bedrooms", "3"}, {"house 1", "has_ac", "yes"}});
}

void write_lines(const std::filesystem::path& path, std::initializer_list<std::string> lines) {
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
}

}  // namespace

TEST_SUITE("kg") {
  TEST_CASE("linearization joins triples with markers in order") {
    const auto lin = kg::linearize(two_triples());
    CHECK(lin.text == "<H> house 1 <R> bedrooms <T> 3 <H> house 1 <R> has_ac <T> yes");
    CHECK(lin.triple_count == 2);
    CHECK(lin.token_count == kg::source_token_count(lin.text));
  }

  TEST_CASE("linearize rejects an empty graph") {
    CHECK_THROWS_AS(kg::linearize(kg::KGGraph{}), DataError);
  }

  TEST_CASE("parse_linearized inverts linearize on random graphs") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 300; ++i) {
      const auto g = testing::random_graph(rng);
      const auto back = kg::parse_linearized(kg::linearize(g, 100000).text);
      REQUIRE(back == g);
    }
  }

  TEST_CASE("parse errors carry the offset of the problem") {
    CHECK_THROWS_AS(kg::parse_linearized(""), ParseError);
    CHECK_THROWS_AS(kg::parse_linearized("house <R> a <T> b"), ParseError);
    try {
      kg::parse_linearized("<H> a <R> r");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() > 0);
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
    CHECK_THROWS_AS(kg::parse_linearized("<H> a <R>  <T> b"), ParseError);
  }

  TEST_CASE("graphs reject reserved words, blank fields and duplicate triples") {
    CHECK_THROWS_AS(kg::KGGraph::from_triples({{"a", "<R>", "b"}}), DataError);
    CHECK_THROWS_AS(kg::KGGraph::from_triples({{"", "r", "b"}}), DataError);
    CHECK_THROWS_AS(kg::KGGraph::from_triples({{" a", "r", "b"}}), DataError);
    CHECK_THROWS_AS(kg::KGGraph::from_triples({{"a", "r", "b"}, {"a", "r", "b"}}), DataError);
    CHECK_THROWS_AS(kg::KGGraph({"a"}, {{"a", "r", "b"}}), DataError);
    const auto g = kg::KGGraph::from_triples({{"a", "r", "b"}, {"b", "s", "a"}, {"c", "r", "d"}});
    CHECK(g.entities() == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(g.tails_of("r") == std::vector<std::string>{"b", "d"});
    CHECK(g.relation_labels() == std::set<std::string>{"r", "s"});
  }

  TEST_CASE("truncation stops at a triple boundary within the budget") {
    std::vector<kg::Triple> triples;
    for (int i = 0; i < 50; ++i) triples.push_back({"h", "r" + std::to_string(i), "t"});
    const auto g = kg::KGGraph::from_triples(triples);
    const auto full = kg::linearize(g, 100000);
    CHECK(full.token_count == 300);
    const auto cut = kg::linearize(g, 100);
    CHECK(cut.triple_count == 16);
    CHECK(cut.token_count == 96);
    CHECK(cut.token_count <= 100);
    const auto parsed = kg::parse_linearized(cut.text);
    CHECK(parsed.size() == 16);
    CHECK(parsed.triples().back().relation == "r15");
    CHECK_THROWS_AS(kg::linearize(g, 5), DataError);
  }

  TEST_CASE("split_text lowercases and isolates punctuation") {
    CHECK(kg::split_text("Hello, World!  It's 3-bed.") ==
          std::vector<std::string>{"hello", ",", "world", "!", "it's", "3-bed", "."});
    CHECK(kg::split_text("<H> a") == std::vector<std::string>{"<", "h", ">", "a"});
    CHECK(kg::split_source("<hal_low> <H> A b") == std::vector<std::string>{"<hal_low>", "<H>", "a", "b"});
    CHECK(kg::normalize_text("  A  b. ") == "a b .");
    CHECK(kg::is_punctuation(".,"));
    CHECK_FALSE(kg::is_punctuation("a."));
  }

  TEST_CASE("vocabulary keeps the reserved block and maps OOV to UNK") {
    kg::Vocabulary v;
    CHECK(v.size() == kg::Vocabulary::kNumReserved);
    CHECK(v.token(kg::Vocabulary::kHalHigh) == "<hal_high>");
    const auto a = v.add("apple");
    CHECK(a == kg::Vocabulary::kNumReserved);
    CHECK(v.add("apple") == a);
    CHECK(v.id("pear") == kg::Vocabulary::kUnk);
    const auto ids = kg::tokenize("Apple pear", v);
    CHECK(ids == std::vector<kg::TokenId>{a, kg::Vocabulary::kUnk});
    const std::vector<kg::TokenId> with_specials{kg::Vocabulary::kBos, a, kg::Vocabulary::kEos, kg::Vocabulary::kPad};
    CHECK(kg::detokenize(with_specials, v) == "apple");
    CHECK(kg::tokenize_source("<hal_low> <H> apple", v) ==
          std::vector<kg::TokenId>{kg::Vocabulary::kHalLow, kg::Vocabulary::kHead, a});
  }

  TEST_CASE("vocabulary round-trips through JSON and files") {
    kg::Vocabulary v;
    for (const char* w : {"zeta", "alpha", "mid"}) v.add(w);
    const auto back = kg::Vocabulary::from_json(v.to_json());
    CHECK(back.size() == v.size());
    CHECK(back.id("alpha") == v.id("alpha"));
    CHECK(back.hash() == v.hash());
    TempDir dir;
    v.save(dir / "vocab.json");
    CHECK(kg::Vocabulary::load(dir / "vocab.json").hash() == v.hash());

    auto broken = v.to_json();
    broken["alpha"] = broken["zeta"];
    CHECK_THROWS_AS(kg::Vocabulary::from_json(broken), DataError);
    auto renamed = v.to_json();
    renamed.erase("<unk>");
    renamed["unk"] = 3;
    CHECK_THROWS_AS(kg::Vocabulary::from_json(renamed), DataError);
  }

  TEST_CASE("load_dataset validates the schema and names the line") {
    TempDir dir;
    const auto path = dir / "train.jsonl";
    write_lines(path, {R"({"id": "a", "triples": [["h", "r", "t"]], "text": "h r t ."})", "",
                       R"({"id": "b", "triples": [["h", "r", "t"]]})"});
    try {
      kg::load_dataset(path, kg::Split::train);
      FAIL("expected a data error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
    const auto test = kg::load_dataset(path, kg::Split::test);
    REQUIRE(test.size() == 2);
    CHECK_FALSE(test[1].reference.has_value());
    CHECK(test[0].split == kg::Split::test);

    write_lines(path, {R"({"id": "a", "triples": [], "text": "x"})"});
    CHECK_THROWS_AS(kg::load_dataset(path, kg::Split::train), DataError);
    write_lines(path, {R"({"id": "a", "triples": [["h", "r"]], "text": "x"})"});
    CHECK_THROWS_AS(kg::load_dataset(path, kg::Split::train), DataError);
    write_lines(path, {R"({"id": "a", "triples": [["h", "r", "t"]], "text": "x"})",
                       R"({"id": "a", "triples": [["h", "r", "u"]], "text": "y"})"});
    CHECK_THROWS_AS(kg::load_dataset(path, kg::Split::train), DataError);
    write_lines(path, {"not json"});
    CHECK_THROWS_AS(kg::load_dataset(path, kg::Split::train), DataError);
    write_lines(path, {});
    CHECK(kg::load_dataset(path, kg::Split::train).empty());
  }

  TEST_CASE("datasets round-trip through save_dataset") {
    std::mt19937_64 rng(9);
    std::vector<kg::TextSample> samples;
    for (int i = 0; i < 20; ++i) {
      samples.push_back({"s" + std::to_string(i), testing::random_graph(rng), "text " + std::to_string(i),
                         kg::Split::valid});
    }
    TempDir dir;
    kg::save_dataset(dir / "d.jsonl", samples);
    const auto back = kg::load_dataset(dir / "d.jsonl", kg::Split::valid);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      CHECK(back[i].id == samples[i].id);
      CHECK(back[i].graph == samples[i].graph);
      CHECK(back[i].reference == samples[i].reference);
    }
  }

  TEST_CASE("dataset statistics match a direct recount") {
    std::mt19937_64 rng(5);
    std::vector<kg::TextSample> samples;
    for (int i = 0; i < 40; ++i) {
      samples.push_back({std::to_string(i), testing::random_graph(rng, 6),
                         i % 3 ? std::optional<std::string>("x") : std::nullopt, kg::Split::train});
    }
    const auto stats = kg::compute_stats(samples);
    std::set<std::string> entities;
    std::map<std::string, std::size_t> relations;
    std::size_t triples = 0, refs = 0;
    for (const auto& s : samples) {
      refs += s.reference.has_value();
      for (const auto& t : s.graph.triples()) {
        ++triples;
        entities.insert(t.head);
        entities.insert(t.tail);
        ++relations[t.relation];
      }
    }
    CHECK(stats.samples == samples.size());
    CHECK(stats.triples == triples);
    CHECK(stats.entities == entities.size());
    CHECK(stats.with_reference == refs);
    CHECK(stats.relation_counts == relations);
    CHECK(stats.relation_count() == relations.size());
  }

  TEST_CASE("split names round-trip") {
    for (auto s : {kg::Split::train, kg::Split::valid, kg::Split::test}) {
      CHECK(kg::split_from_string(kg::to_string(s)) == s);
    }
    CHECK_THROWS_AS(kg::split_from_string("dev"), ConfigError);
  }
}
