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

#include "faithgen/eval/judge.hpp"

#include <cstdlib>
#include <set>
#include <thread>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "faithgen/common/error.hpp"
#include "faithgen/common/jsonl.hpp"
#include "faithgen/control/scorer.hpp"
#include "faithgen/kg/linearize.hpp"
#include "faithgen/kg/tokenize.hpp"

namespace faithgen::eval {

namespace {

std::string numbered(const std::vector<std::string>& items) {
  if (items.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back('\n');
    out += std::to_string(i + 1) + ". " + items[i];
  }
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

nlohmann::json JudgeFixtureEntry::to_json() const {
  nlohmann::json answers_json = nlohmann::json::array();
  for (const auto& a : answers) answers_json.push_back({{"fact", a.fact}, {"included", a.included}, {"reply", a.reply}});
  return {{"id", id},           {"input", input},         {"output", output},
          {"input_facts", input_facts}, {"answers", answers_json}, {"extrinsic", extrinsic},
          {"intrinsic", intrinsic}, {"fluency", fluency}};
}

JudgeFixtureEntry JudgeFixtureEntry::from_json(const nlohmann::json& j) {
  JudgeFixtureEntry e;
  try {
    e.id = j.at("id").get<std::string>();
    e.input = j.at("input").get<std::string>();
    e.output = j.at("output").get<std::string>();
    e.input_facts = j.at("input_facts").get<std::vector<std::string>>();
    for (const auto& a : j.at("answers")) {
      e.answers.push_back({a.at("fact").get<std::string>(), a.at("included").get<bool>(), a.at("reply").get<std::string>()});
    }
    e.extrinsic = j.at("extrinsic").get<std::vector<std::string>>();
    e.intrinsic = j.at("intrinsic").get<std::vector<std::string>>();
    e.fluency = j.value("fluency", std::string("4"));
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("judge fixture entry: ") + ex.what());
  }
  return e;
}

std::vector<JudgeFixtureEntry> read_judge_fixture(const std::filesystem::path& path) {
  std::vector<JudgeFixtureEntry> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) { out.push_back(JudgeFixtureEntry::from_json(j)); });
  return out;
}

void write_judge_fixture(const std::filesystem::path& path, const std::vector<JudgeFixtureEntry>& entries) {
  std::vector<json> rows;
  for (const auto& e : entries) rows.push_back(e.to_json());
  write_jsonl(path, rows);
}

MockJudge::MockJudge(std::vector<JudgeFixtureEntry> fixture) : fixture_(std::move(fixture)) {
  for (std::size_t i = 0; i < fixture_.size(); ++i) {
    if (!index_.emplace(std::pair{fixture_[i].input, fixture_[i].output}, i).second) {
      throw DataError("judge fixture has two entries for sample '" + fixture_[i].id + "'");
    }
  }
}

const JudgeFixtureEntry* MockJudge::find(const std::string& input, const std::string& output) const {
  auto it = index_.find({input, output});
  if (it == index_.end() && output.empty()) {
    // Template-1 carries no output; match on the input alone.
    for (const auto& e : fixture_) {
      if (e.input == input) return &e;
    }
    return nullptr;
  }
  return it == index_.end() ? nullptr : &fixture_[it->second];
}

std::string MockJudge::complete(const JudgePrompt& prompt) {
  const JudgeFixtureEntry* entry = find(prompt.input, prompt.output);
  if (entry == nullptr) return rule_based(prompt);
  const std::string& id = prompt.template_id;
  if (id == kTemplateInputFacts) return numbered(entry->input_facts);
  if (id == kTemplateCommonFact) {
    const std::string key = lower(prompt.fact);
    for (const auto& a : entry->answers) {
      if (lower(a.fact) == key) return a.reply;
    }
    return "no";
  }
  if (id == kTemplateExtrinsic) return numbered(entry->extrinsic);
  if (id == kTemplateIntrinsic) return numbered(entry->intrinsic);
  if (id == kTemplateFluency) return entry->fluency;
  throw ConfigError("mock judge cannot answer template '" + id + "'");
}

std::string MockJudge::rule_based(const JudgePrompt& prompt) const {
  const std::string& id = prompt.template_id;
  if (id == kTemplateFluency) return "4";
  const kg::KGGraph graph = kg::parse_linearized(prompt.input);
  if (id == kTemplateInputFacts) {
    std::vector<std::string> facts;
    for (const auto& t : graph.triples()) facts.push_back(t.relation + ": " + t.tail);
    return numbered(facts);
  }
  const auto out_tokens = kg::split_text(prompt.output);
  const std::unordered_set<std::string> output_set(out_tokens.begin(), out_tokens.end());
  if (id == kTemplateCommonFact) {
    const auto colon = prompt.fact.find(':');
    const auto value = colon == std::string::npos ? prompt.fact : prompt.fact.substr(colon + 1);
    const auto value_tokens = kg::split_text(value);
    if (value_tokens.empty()) return "no";
    for (const auto& tok : value_tokens) {
      if (!output_set.contains(tok)) return "no";
    }
    return "yes";
  }
  if (id == kTemplateExtrinsic) {
    const auto source_tokens = kg::split_source(prompt.input);
    const std::unordered_set<std::string> supported(source_tokens.begin(), source_tokens.end());
    static const std::set<std::string> stopwords = control::LexicalOverlapScorer::default_stopwords();
    std::vector<std::string> facts;
    std::vector<std::string> sentence;
    bool unsupported = false;
    auto flush = [&] {
      if (unsupported && !sentence.empty()) {
        std::string s;
        for (const auto& w : sentence) s += (s.empty() ? "" : " ") + w;
        facts.push_back(s);
      }
      sentence.clear();
      unsupported = false;
    };
    for (const auto& tok : out_tokens) {
      if (tok == "." || tok == "!" || tok == "?") {
        flush();
        continue;
      }
      sentence.push_back(tok);
      if (!kg::is_punctuation(tok) && !stopwords.contains(tok) && !supported.contains(tok)) unsupported = true;
    }
    flush();
    return numbered(facts);
  }
  if (id == kTemplateIntrinsic) return "none";
  throw ConfigError("mock judge cannot answer template '" + id + "'");
}

nlohmann::json RemoteJudgeConfig::to_json() const {
  return {{"endpoint", endpoint},
          {"model", model},
          {"api_key_env", api_key_env},
          {"timeout_ms", timeout.count()},
          {"max_retries", max_retries},
          {"initial_backoff_ms", initial_backoff.count()},
          {"max_in_flight", max_in_flight}};
}

RemoteJudgeConfig RemoteJudgeConfig::from_json(const nlohmann::json& j) {
  RemoteJudgeConfig c;
  if (!j.is_object()) throw ConfigError("judge config must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "endpoint") {
        c.endpoint = value.get<std::string>();
      } else if (key == "model") {
        c.model = value.get<std::string>();
      } else if (key == "api_key_env") {
        c.api_key_env = value.get<std::string>();
      } else if (key == "timeout_ms") {
        c.timeout = std::chrono::milliseconds(value.get<std::int64_t>());
      } else if (key == "max_retries") {
        c.max_retries = value.get<int>();
      } else if (key == "initial_backoff_ms") {
        c.initial_backoff = std::chrono::milliseconds(value.get<std::int64_t>());
      } else if (key == "max_in_flight") {
        c.max_in_flight = value.get<int>();
      } else {
        throw ConfigError("unknown judge option '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("judge config: ") + e.what());
  }
  if (c.max_retries < 0 || c.max_in_flight < 1) throw ConfigError("judge retries/in-flight out of range");
  return c;
}

RemoteJudge::RemoteJudge(RemoteJudgeConfig config) : config_(std::move(config)) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("environment variable " + config_.api_key_env + " is not set for the remote judge");
  }
  endpoint_.url = config_.endpoint;
  endpoint_.timeout = config_.timeout;
  endpoint_.headers.emplace_back("Authorization", std::string("Bearer ") + key);
}

std::string RemoteJudge::complete(const JudgePrompt& prompt) {
  const nlohmann::json body = {{"model", config_.model},
                               {"temperature", 0},
                               {"messages", {{{"role", "user"}, {"content", prompt.text}}}}};
  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      const auto reply = post_json(endpoint_, body);
      const auto& choices = reply.at("choices");
      if (!choices.is_array() || choices.empty()) throw ServiceError("judge reply has no choices");
      return choices[0].at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ServiceError(std::string("malformed judge reply: ") + e.what());
    } catch (const ServiceError& e) {
      const int status = http_status_of(e.what());
      const bool retryable = status == 0 || status == 429 || status >= 500;
      if (!retryable || attempt >= config_.max_retries) throw;
      spdlog::warn("judge request failed ({}); retrying in {} ms", e.what(), backoff.count());
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
}

nlohmann::json JudgeTranscript::to_json() const {
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& e : exchanges) {
    ex.push_back({{"template", e.template_id}, {"fact", e.fact}, {"prompt", e.prompt}, {"response", e.response}});
  }
  return {{"sample_id", sample_id}, {"judge", judge}, {"input", input}, {"output", output}, {"exchanges", ex}};
}

JudgeTranscript JudgeTranscript::from_json(const nlohmann::json& j) {
  JudgeTranscript t;
  try {
    t.sample_id = j.at("sample_id").get<std::string>();
    t.judge = j.at("judge").get<std::string>();
    t.input = j.at("input").get<std::string>();
    t.output = j.at("output").get<std::string>();
    for (const auto& e : j.at("exchanges")) {
      t.exchanges.push_back({e.at("template").get<std::string>(), e.at("fact").get<std::string>(),
                             e.at("prompt").get<std::string>(), e.at("response").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("judge transcript: ") + e.what());
  }
  return t;
}

ReplayJudge::ReplayJudge(const std::vector<JudgeTranscript>& transcripts) {
  for (const auto& t : transcripts) {
    for (const auto& e : t.exchanges) responses_[{e.template_id, e.prompt}] = e.response;
  }
}

std::string ReplayJudge::complete(const JudgePrompt& prompt) {
  const auto it = responses_.find({prompt.template_id, prompt.text});
  if (it == responses_.end()) {
    throw UpstreamMissingError("no recorded judge reply for a " + prompt.template_id + " prompt");
  }
  return it->second;
}

}  // namespace faithgen::eval
