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

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "faithgen/common/http.hpp"
#include "faithgen/eval/templates.hpp"
#include "json.hpp"

namespace faithgen::eval {

/// One judge query: the template, its filled-in fields and the final text.
struct JudgePrompt {
  std::string template_id;
  std::string input;
  std::string output;
  std::string fact;
  std::string text;
};

/// A single-turn judge. Implementations must be safe to call concurrently.
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual std::string name() const = 0;
  virtual std::string complete(const JudgePrompt& prompt) = 0;
};

/// Canned judge answers for one (input, output) pair.
struct JudgeFixtureEntry {
  struct Answer {
    std::string fact;
    bool included = false;
    std::string reply;
  };
  std::string id;
  std::string input;
  std::string output;
  /// Raw Template-1 reply lines (may contain duplicates).
  std::vector<std::string> input_facts;
  std::vector<Answer> answers;
  std::vector<std::string> extrinsic;
  std::vector<std::string> intrinsic;
  std::string fluency = "4";

  nlohmann::json to_json() const;
  static JudgeFixtureEntry from_json(const nlohmann::json& j);
};

std::vector<JudgeFixtureEntry> read_judge_fixture(const std::filesystem::path& path);
void write_judge_fixture(const std::filesystem::path& path, const std::vector<JudgeFixtureEntry>& entries);

/// Deterministic offline judge. Pairs found in the fixture are answered from
/// it; any other pair gets rule-based answers: the input's triples as
/// "relation: value" facts, "yes" when every value token occurs in the
/// output, output sentences with unsupported content words as extrinsic
/// facts, no intrinsic facts, and fluency 4.
class MockJudge final : public JudgeClient {
 public:
  MockJudge() = default;
  explicit MockJudge(std::vector<JudgeFixtureEntry> fixture);

  std::string name() const override { return "mock"; }
  std::string complete(const JudgePrompt& prompt) override;

 private:
  const JudgeFixtureEntry* find(const std::string& input, const std::string& output) const;
  std::string rule_based(const JudgePrompt& prompt) const;

  std::vector<JudgeFixtureEntry> fixture_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
};

struct RemoteJudgeConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-3.5-turbo";
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{60000};
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{500};
  int max_in_flight = 4;

  nlohmann::json to_json() const;
  static RemoteJudgeConfig from_json(const nlohmann::json& j);
};

/// Chat-completions judge (temperature 0). Transport failures, 429 and 5xx
/// responses are retried with exponential backoff; other errors are not.
class RemoteJudge final : public JudgeClient {
 public:
  /// Throws ConfigError when the API key variable is unset.
  explicit RemoteJudge(RemoteJudgeConfig config);

  std::string name() const override { return "remote:" + config_.model; }
  std::string complete(const JudgePrompt& prompt) override;

 private:
  RemoteJudgeConfig config_;
  HttpEndpoint endpoint_;
};

/// One prompt/response pair of a transcript.
struct JudgeExchange {
  std::string template_id;
  std::string fact;
  std::string prompt;
  std::string response;
};

/// Everything a judge was asked about one sample, in a fixed order:
/// Template-1, one Template-2 per input fact, 3a, 3b, then fluency.
struct JudgeTranscript {
  std::string sample_id;
  std::string judge;
  std::string input;
  std::string output;
  std::vector<JudgeExchange> exchanges;

  nlohmann::json to_json() const;
  static JudgeTranscript from_json(const nlohmann::json& j);
};

/// Answers from recorded transcripts; an unrecorded prompt throws
/// UpstreamMissingError.
class ReplayJudge final : public JudgeClient {
 public:
  explicit ReplayJudge(const std::vector<JudgeTranscript>& transcripts);

  std::string name() const override { return "replay"; }
  std::string complete(const JudgePrompt& prompt) override;

 private:
  std::map<std::pair<std::string, std::string>, std::string> responses_;
};

}  // namespace faithgen::eval
