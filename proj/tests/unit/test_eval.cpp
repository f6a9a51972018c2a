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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <cstdlib>
#include <random>
#include <thread>

#include "doctest.h"
#include "faithgen/common/error.hpp"
#include "faithgen/eval/fact_eval.hpp"
#include "faithgen/eval/report.hpp"
#include "faithgen/eval/templates.hpp"
#include "faithgen/eval/text_metrics.hpp"
#include "faithgen/kg/tokenize.hpp"
#include "support.hpp"

using namespace faithgen;
using eval::FactSet;

namespace {

kg::LinearizedGraph house_graph(int triples) {
  const char* relations[] = {"house_location", "bedrooms", "bathrooms", "has_ac", "garage_spaces",
                             "has_pool",       "floor",    "year",      "roof",   "gym",
                             "view",           "heating"};
  std::vector<kg::Triple> t;
  for (int i = 0; i < triples; ++i) t.push_back({"house", relations[i], "v" + std::to_string(i)});
  return kg::linearize(kg::KGGraph::from_triples(t));
}

/// Scripted judge: fixed replies per template, with per-fact answers.
class ScriptedJudge final : public eval::JudgeClient {
 public:
  std::string input_facts = "none";
  std::string extrinsic = "none";
  std::string intrinsic = "none";
  std::string fluency = "3";
  std::function<std::string(const std::string&)> answer = [](const std::string&) { return "no"; };
  std::atomic<int> calls{0};

  std::string name() const override { return "scripted"; }
  std::string complete(const eval::JudgePrompt& p) override {
    ++calls;
    if (p.template_id == eval::kTemplateInputFacts) return input_facts;
    if (p.template_id == eval::kTemplateCommonFact) return answer(p.fact);
    if (p.template_id == eval::kTemplateExtrinsic) return extrinsic;
    if (p.template_id == eval::kTemplateIntrinsic) return intrinsic;
    return fluency;
  }
};

eval::Tokens words(const std::string& s) { return kg::split_text(s); }

/// Longest common subsequence by enumerating every subsequence of `a`.
std::size_t brute_force_lcs(const eval::Tokens& a, const eval::Tokens& b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    const auto len = static_cast<std::size_t>(std::popcount(mask));
    if (len <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else ++j;
    }
    if (ok) best = len;
  }
  return best;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("fact sets deduplicate case-insensitively and keep first spelling") {
    FactSet s;
    CHECK(s.add("  Bedrooms: 3 "));
    CHECK_FALSE(s.add("bedrooms: 3"));
    CHECK_FALSE(s.add("   "));
    CHECK(s.add("has_ac: yes"));
    CHECK(s.size() == 2);
    CHECK(s.facts().front() == "Bedrooms: 3");
    CHECK(s.contains("BEDROOMS: 3"));
    FactSet t{"HAS_AC: YES", "garage: 1"};
    s.merge(t);
    CHECK(s.size() == 3);
    CHECK(eval::fact_type("Has_AC : yes") == "has_ac");
    CHECK(eval::fact_type("no colon") == "no colon");
  }

  TEST_CASE("list replies parse numbered and bulleted lines") {
    CHECK(eval::strip_list_marker("12. bedrooms: 3") == "bedrooms: 3");
    CHECK(eval::strip_list_marker("3) x") == "x");
    CHECK(eval::strip_list_marker("- x") == "x");
    CHECK(eval::strip_list_marker("* x") == "x");
    CHECK(eval::strip_list_marker("• x") == "x");
    CHECK(eval::strip_list_marker("  plain ") == "plain");

    const auto facts = eval::parse_fact_list("Here are the features:\n1. bedrooms: 3\n2) bathrooms: 2\n- has_ac: yes\n");
    CHECK(facts.facts() == std::vector<std::string>{"bedrooms: 3", "bathrooms: 2", "has_ac: yes"});
    CHECK(eval::parse_fact_list("None.").empty());
    CHECK(eval::parse_fact_list(" none ").empty());
    try {
      eval::parse_fact_list("I cannot answer that");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("I cannot answer that") != std::string::npos);
    }
  }

  TEST_CASE("yes/no replies") {
    CHECK(eval::is_affirmative("Yes."));
    CHECK(eval::is_affirmative("1. yes, it is"));
    CHECK_FALSE(eval::is_affirmative("No"));
    CHECK_FALSE(eval::is_affirmative("maybe"));
    CHECK(eval::is_yes_no("no."));
    CHECK_FALSE(eval::is_yes_no("perhaps"));
    CHECK(eval::parse_fluency("I'd say 4 out of 5") == 4);
    CHECK_FALSE(eval::parse_fluency("7 then 2").has_value());
    CHECK_FALSE(eval::parse_fluency("fluent").has_value());
  }

  TEST_CASE("templates render every placeholder") {
    const auto t = eval::TemplateSet::builtin();
    CHECK(eval::builtin_template_texts().size() == 5);
    CHECK(t.text(eval::kTemplateInputFacts).find("List the features one by one from the INPUT") != std::string::npos);
    CHECK(t.text(eval::kTemplateIntrinsic).find("contradictory to the INPUT") != std::string::npos);
    const auto r = t.render(eval::kTemplateCommonFact, "IN", "OUT", "F: v");
    CHECK(r.find("INPUT: IN") != std::string::npos);
    CHECK(r.find("OUTPUT: OUT") != std::string::npos);
    CHECK(r.find("FEATURE: F: v") != std::string::npos);
    CHECK(r.find('{') == std::string::npos);
    CHECK_THROWS(t.text("v9/none"));

    testing::TempDir dir;
    CHECK_THROWS_AS(eval::TemplateSet::load(dir.path()), ConfigError);
    for (const auto& [id, text] : eval::builtin_template_texts()) {
      std::ofstream(dir.path() / (std::filesystem::path(id).filename().string() + ".txt"))
          << "custom " << id << " {input}";
    }
    CHECK(eval::TemplateSet::load(dir.path()).render(eval::kTemplateFluency, "x", "", "") == "custom v1/fluency x");
  }

  TEST_CASE("input fact enumeration counts distinct facts") {
    const auto templates = eval::TemplateSet::builtin();
    const auto lin = house_graph(12);
    ScriptedJudge judge;
    std::string listing;
    for (int i = 0; i < 12; ++i) listing += std::to_string(i + 1) + ". fact " + std::to_string(i) + "\n";
    listing += "13. FACT 3\n";
    judge.input_facts = listing;
    eval::Transcript transcript;
    CHECK(eval::enumerate_input_facts(lin, judge, templates, &transcript).size() == 12);
    REQUIRE(transcript.size() == 1);
    CHECK(transcript[0].template_id == eval::kTemplateInputFacts);

    eval::MockJudge mock;
    for (int k = 1; k <= 12; ++k) CHECK(eval::enumerate_input_facts(house_graph(k), mock, templates).size() == k);
  }

  TEST_CASE("common fact counting follows the judge's answers") {
    const auto templates = eval::TemplateSet::builtin();
    const auto lin = house_graph(10);
    FactSet facts;
    for (int i = 0; i < 10; ++i) facts.add("fact " + std::to_string(i));
    ScriptedJudge judge;
    judge.answer = [](const std::string&) { return "Yes"; };
    CHECK(eval::count_common_facts(facts, lin, "out", judge, templates) == 10);
    judge.answer = [](const std::string&) { return "no"; };
    CHECK(eval::count_common_facts(facts, lin, "out", judge, templates) == 0);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      std::set<std::string> yes;
      for (const auto& f : facts) {
        if (rng() % 2) yes.insert(f);
      }
      judge.answer = [&](const std::string& f) {
        if (yes.contains(f)) return "yes";
        return f.back() % 2 ? "no" : "unclear";
      };
      CHECK(eval::count_common_facts(facts, lin, "out", judge, templates) == yes.size());
      eval::JudgeOptions parallel;
      parallel.max_in_flight = 4;
      eval::Transcript transcript;
      const auto common = eval::common_facts(facts, lin, "out", judge, templates, parallel, &transcript);
      CHECK(common.size() == yes.size());
      REQUIRE(transcript.size() == facts.size());
      for (std::size_t i = 0; i < facts.size(); ++i) CHECK(transcript[i].fact == facts.facts()[i]);
    }
    CHECK_THROWS_AS(eval::count_common_facts(FactSet{}, lin, "out", judge, templates), DataError);
  }

  TEST_CASE("hallucinated facts are the union of both lists") {
    const auto templates = eval::TemplateSet::builtin();
    const auto lin = house_graph(3);
    ScriptedJudge judge;
    CHECK(eval::enumerate_hallucinated_facts(lin, "o", judge, templates).empty());
    judge.extrinsic = "1. a pool\n2. a gym";
    judge.intrinsic = "1. bedrooms: 7\n2. A POOL";
    eval::Transcript transcript;
    const auto h = eval::enumerate_hallucinated_facts(lin, "o", judge, templates, &transcript);
    CHECK(h.facts() == std::vector<std::string>{"a pool", "a gym", "bedrooms: 7"});
    REQUIRE(transcript.size() == 2);
    CHECK(transcript[0].template_id == eval::kTemplateExtrinsic);
    CHECK(transcript[1].template_id == eval::kTemplateIntrinsic);
  }

  TEST_CASE("precision, recall and hallucination rate") {
    const auto r = eval::compute_prh(10, 6, 2);
    CHECK(r.n_output == 8);
    CHECK(r.precision == doctest::Approx(0.75));
    CHECK(r.recall == doctest::Approx(0.6));
    CHECK(r.hallucination_rate == doctest::Approx(0.25));
    CHECK(r.precision + r.hallucination_rate == doctest::Approx(1.0));
    const auto d = eval::compute_prh(5, 0, 0);
    CHECK(d.degenerate);
    CHECK(d.precision == 0.0);
    CHECK(d.hallucination_rate == 0.0);
    CHECK(d.recall == 0.0);
    CHECK_THROWS_AS(eval::compute_prh(0, 0, 1), DataError);
    CHECK_THROWS_AS(eval::compute_prh(3, 4, 0), DataError);
    CHECK(r.to_json()["precision"] == 0.75);
  }

  TEST_CASE("salient precision and recall") {
    const std::vector<std::string> salient{"bedrooms", "has_ac"};
    const FactSet input{"bedrooms: 3", "has_ac: yes", "roof: flat", "view: sea"};
    const FactSet common{"bedrooms: 3", "roof: flat"};
    const auto s = eval::compute_salient(input, common, salient, 4);
    CHECK(s.n_salient_input == 2);
    CHECK(s.n_salient_common == 1);
    CHECK(s.precision == doctest::Approx(0.25));
    CHECK(s.recall == doctest::Approx(0.5));
    const auto none = eval::compute_salient(FactSet{"roof: flat"}, FactSet{}, salient, 0);
    CHECK(none.precision_degenerate);
    CHECK(none.recall_degenerate);
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
  }

  TEST_CASE("salient feature ranking") {
    auto make = [](std::string id, std::vector<std::string> relations) {
      std::vector<kg::Triple> t;
      for (const auto& r : relations) t.push_back({"h", r, "v"});
      return kg::TextSample{std::move(id), kg::KGGraph::from_triples(t), "x", kg::Split::train};
    };
    std::vector<kg::TextSample> train{make("1", {"c", "b", "a"}), make("2", {"c", "b"}), make("3", {"c", "d"})};
    CHECK(eval::rank_salient_features(train, 10) == std::vector<std::string>{"c", "b", "a", "d"});
    CHECK(eval::rank_salient_features(train, 2) == std::vector<std::string>{"c", "b"});
    std::vector<kg::TextSample> uniform{make("1", {"z", "y", "x"})};
    CHECK(eval::rank_salient_features(uniform, 3) == std::vector<std::string>{"x", "y", "z"});
    std::reverse(train.begin(), train.end());
    CHECK(eval::rank_salient_features(train, 10) == std::vector<std::string>{"c", "b", "a", "d"});
  }

  TEST_CASE("BLEU-4 on hand-counted pairs") {
    const auto ref = words("the cat sat on the mat with a hat .");
    CHECK(eval::bleu4(ref, ref) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval::bleu4(words("dog runs far away now"), ref) == 0.0);
    CHECK(eval::bleu4({}, ref) == 0.0);
    CHECK(eval::bleu4(words("hat a with mat the"), ref) == 0.0);
    // "the cat sat on a mat with the hat .": clipped 1-grams 10/10,
    // 2-grams 5/9, 3-grams 2/8, 4-grams 1/7; equal lengths.
    CHECK(eval::bleu4(words("the cat sat on a mat with the hat ."), ref) ==
          doctest::Approx(std::exp((std::log(5.0 / 9) + std::log(2.0 / 8) + std::log(1.0 / 7)) / 4)).epsilon(1e-14));
    // "the cat sat on the mat" (6 tokens vs 10): p = 1 for every order,
    // brevity penalty exp(1 - 10/6).
    CHECK(eval::bleu4(words("the cat sat on the mat"), ref) ==
          doctest::Approx(std::exp(1.0 - 10.0 / 6.0)).epsilon(1e-14));
    // "the the the cat sat on mat with a hat ." (11 tokens): clipped 1-grams
    // 10/11; 2-grams 7/10; 3-grams 5/9; 4-grams 3/8; no brevity penalty.
    const double expected = std::exp((std::log(10.0 / 11) + std::log(7.0 / 10) + std::log(5.0 / 9) +
                                      std::log(3.0 / 8)) / 4);
    CHECK(eval::bleu4(words("the the the cat sat on mat with a hat ."), ref) ==
          doctest::Approx(expected).epsilon(1e-14));
  }

  TEST_CASE("corpus BLEU pools counts across pairs") {
    const std::vector<eval::Tokens> refs{words("a b c d e"), words("f g h i j k")};
    CHECK(eval::corpus_bleu4(refs, refs) == doctest::Approx(1.0));
    const std::vector<eval::Tokens> cands{words("a b c d e"), words("f g h i")};
    // n-gram matches: (5+4, 4+3, 3+2, 2+1) over the same totals; lengths 9 vs 11.
    const double expected = std::exp(1.0 - 11.0 / 9.0);
    CHECK(eval::corpus_bleu4(cands, refs) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS(eval::corpus_bleu4(cands, std::span<const eval::Tokens>(refs.data(), 1)));
  }

  TEST_CASE("ROUGE-L matches an exhaustive LCS oracle") {
    CHECK(eval::rouge_l(words("a b c"), words("a b c")) == 1.0);
    CHECK(eval::rouge_l(words("a b c"), words("d e")) == 0.0);
    CHECK(eval::rouge_l({}, words("d e")) == 0.0);
    // LCS("a x b y c", "a b c d") = 3: P = 3/5, R = 3/4.
    CHECK(eval::rouge_l(words("a x b y c"), words("a b c d")) == doctest::Approx(2 * 0.6 * 0.75 / 1.35));
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> len(0, 12), tok(0, 4);
    for (int trial = 0; trial < 500; ++trial) {
      eval::Tokens a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
      for (auto& t : a) t = std::string(1, static_cast<char>('a' + tok(rng)));
      for (auto& t : b) t = std::string(1, static_cast<char>('a' + tok(rng)));
      REQUIRE(eval::lcs_length(a, b) == brute_force_lcs(a, b));
    }
  }

  TEST_CASE("evaluate_sample records a transcript that replays exactly") {
    const auto templates = eval::TemplateSet::builtin();
    const auto lin = house_graph(5);
    const std::string output = "the house is in v0 with v1 bedrooms . it has a pool .";
    eval::MockJudge mock;
    const std::vector<std::string> salient{"house_location", "bedrooms", "has_ac"};
    const auto ev = eval::evaluate_sample("s1", lin, output, mock, templates, salient);
    CHECK(ev.input_facts.size() == 5);
    CHECK(ev.common.size() == 2);
    CHECK(ev.hallucinated.size() == 1);
    CHECK(ev.prh.n_output == 3);
    CHECK(ev.salient.n_salient_input == 3);
    CHECK(ev.salient.n_salient_common == 2);
    CHECK(ev.fluency == 4);
    CHECK(ev.transcript.exchanges.size() == 1 + 5 + 2 + 1);

    const auto back = eval::JudgeTranscript::from_json(ev.transcript.to_json());
    const auto reparsed = eval::reparse_transcript(back, salient);
    CHECK(reparsed.prh.to_json() == ev.prh.to_json());
    CHECK(reparsed.salient.to_json() == ev.salient.to_json());
    CHECK(reparsed.fluency == ev.fluency);

    eval::ReplayJudge replay({back});
    const auto replayed = eval::evaluate_sample("s1", lin, output, replay, templates, salient);
    CHECK(replayed.prh.to_json() == ev.prh.to_json());
    CHECK_THROWS_AS(eval::evaluate_sample("s1", lin, "other output", replay, templates, salient),
                    UpstreamMissingError);
  }

  TEST_CASE("fixture entries answer before the rule-based fallback") {
    eval::JudgeFixtureEntry e;
    e.id = "f";
    e.input = house_graph(2).text;
    e.output = "whatever";
    e.input_facts = {"house_location: v0", "bedrooms: v1", "BEDROOMS: V1"};
    e.answers = {{"house_location: v0", true, "Yes, it is."}, {"bedrooms: v1", false, "No."}};
    e.extrinsic = {"a moat"};
    e.fluency = "5";
    testing::TempDir dir;
    eval::write_judge_fixture(dir / "fx.jsonl", {e});
    const auto entries = eval::read_judge_fixture(dir / "fx.jsonl");
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].to_json() == e.to_json());
    eval::MockJudge mock(entries);
    const auto ev = eval::evaluate_sample("f", house_graph(2), "whatever", mock, eval::TemplateSet::builtin(), {});
    CHECK(ev.prh.n_input == 2);
    CHECK(ev.prh.n_common == 1);
    CHECK(ev.prh.n_hallucinated == 1);
    CHECK(ev.fluency == 5);
  }

  TEST_CASE("corpus aggregation skips degenerate samples where required") {
    std::vector<eval::SampleReport> samples(3);
    samples[0].prh = eval::compute_prh(4, 2, 2);
    samples[1].prh = eval::compute_prh(4, 4, 0);
    samples[2].prh = eval::compute_prh(4, 0, 0);
    samples[0].rouge_l = 0.5;
    samples[1].rouge_l = 1.0;
    samples[0].fluency = 2;
    samples[2].fluency = 4;
    const auto c = eval::aggregate(samples, 0.3);
    CHECK(c.samples == 3);
    CHECK(c.degenerate == 1);
    CHECK(c.avg_precision == doctest::Approx(0.75));
    CHECK(c.avg_hallucination == doctest::Approx(0.25));
    CHECK(c.avg_recall == doctest::Approx(0.5));
    CHECK(c.rouge_l == doctest::Approx(0.5));
    CHECK(c.bleu == 0.3);
    CHECK(c.fluency == doctest::Approx(3.0));
    const auto j = c.to_json();
    CHECK(j["meteor"].is_null());
    testing::TempDir dir;
    eval::write_sample_csv(dir / "s.csv", samples);
    std::ifstream in(dir / "s.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header.find("precision") != std::string::npos);
    CHECK(header.find("meteor") != std::string::npos);
  }

  TEST_CASE("remote judge retries transient failures") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      const int n = ++hits;
      const auto body = nlohmann::json::parse(req.body);
      if (req.get_header_value("Authorization") != "Bearer test-key" || body["temperature"] != 0) {
        res.status = 401;
        return;
      }
      if (body["messages"][0]["content"] == "bad request") {
        res.status = 400;
        return;
      }
      if (n == 1) {
        res.status = 503;
        return;
      }
      const nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "1. fact"}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ::setenv("FAITHGEN_TEST_JUDGE_KEY", "test-key", 1);
    eval::RemoteJudgeConfig config;
    config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    config.api_key_env = "FAITHGEN_TEST_JUDGE_KEY";
    config.initial_backoff = std::chrono::milliseconds(1);
    config.timeout = std::chrono::milliseconds(5000);
    eval::RemoteJudge judge(config);
    eval::JudgePrompt prompt;
    prompt.text = "list";
    CHECK(judge.complete(prompt) == "1. fact");
    CHECK(hits == 2);
    prompt.text = "bad request";
    CHECK_THROWS_AS(judge.complete(prompt), ServiceError);
    CHECK(hits == 3);
    server.stop();
    thread.join();

    config.api_key_env = "FAITHGEN_TEST_UNSET_KEY";
    ::unsetenv("FAITHGEN_TEST_UNSET_KEY");
    CHECK_THROWS_AS(eval::RemoteJudge{config}, ConfigError);
    const auto back = eval::RemoteJudgeConfig::from_json(config.to_json());
    CHECK(back.to_json() == config.to_json());
  }
}
