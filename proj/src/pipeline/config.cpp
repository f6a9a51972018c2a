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

#include "faithgen/pipeline/config.hpp"

#include <functional>

#include "faithgen/common/error.hpp"
#include "faithgen/common/hash.hpp"
#include "faithgen/common/jsonl.hpp"

namespace faithgen::pipeline {

namespace {

using Handler = std::function<bool(const std::string&, const json&)>;

void for_each_key(const json& j, const std::string& section, const Handler& handle) {
  if (!j.is_object()) throw ConfigError("config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    try {
      known = handle(key, value);
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + section + "." + key + "': " + e.what());
    }
    if (!known) throw ConfigError("unknown config key '" + section + "." + key + "'");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : (base / p).lexically_normal();
}

}  // namespace

json RunConfig::to_json() const {
  json model_json = model.to_json();
  model_json.erase("vocab_size");
  model_json.erase("seed");
  return {
      {"data", {{"train", data.train.string()}, {"valid", data.valid.string()}, {"test", data.test.string()}}},
      {"seed", seed},
      {"model", model_json},
      {"training",
       {{"epochs", training.epochs},
        {"precision", model::to_string(training.precision)},
        {"ablation", model::to_string(training.ablation)},
        {"contrastive_weight", training.contrastive_weight},
        {"temperature", training.temperature},
        {"include_positive_in_denominator", training.include_positive_in_denominator}}},
      {"sampler",
       {{"positives", sampler.positives},
        {"negatives", sampler.negatives},
        {"house_heuristic", sampler.house_heuristic},
        {"paraphraser", sampler.paraphraser},
        {"reorder_clauses", sampler.reorder_clauses},
        {"substitution_rate", sampler.substitution_rate},
        {"paraphraser_endpoint", sampler.paraphraser_endpoint},
        {"paraphraser_timeout_ms", sampler.paraphraser_timeout_ms}}},
      {"scorer",
       {{"name", scorer.name},
        {"stopwords", scorer.stopwords.string()},
        {"buckets", scorer.buckets},
        {"endpoint", scorer.endpoint},
        {"remote_name", scorer.remote_name},
        {"timeout_ms", scorer.timeout_ms}}},
      {"judge",
       {{"kind", judge.kind},
        {"fixture", judge.fixture.string()},
        {"templates", judge.templates.string()},
        {"fluency", judge.fluency},
        {"remote", judge.remote.to_json()}}},
      {"decode", decode.to_json()},
      {"eval", {{"split", eval.split}, {"max_samples", eval.max_samples}}},
      {"output_dir", output_dir.string()},
  };
}

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base) {
  RunConfig c;
  for_each_key(j, "config", [&](const std::string& key, const json& v) {
    if (key == "data") {
      for_each_key(v, "data", [&](const std::string& k, const json& x) {
        if (k == "train") c.data.train = resolve(base, x.get<std::string>());
        else if (k == "valid") c.data.valid = resolve(base, x.get<std::string>());
        else if (k == "test") c.data.test = resolve(base, x.get<std::string>());
        else return false;
        return true;
      });
    } else if (key == "seed") {
      c.seed = v.get<std::uint64_t>();
    } else if (key == "model") {
      if (v.contains("vocab_size")) throw ConfigError("model.vocab_size is derived from the data; remove it");
      if (v.contains("seed")) throw ConfigError("model.seed is taken from the run seed; remove it");
      c.model = model::ModelConfig::from_json(v);
    } else if (key == "training") {
      for_each_key(v, "training", [&](const std::string& k, const json& x) {
        if (k == "epochs") c.training.epochs = x.get<int>();
        else if (k == "precision") c.training.precision = model::precision_from_string(x.get<std::string>());
        else if (k == "ablation") c.training.ablation = model::ablation_from_string(x.get<std::string>());
        else if (k == "contrastive_weight") c.training.contrastive_weight = x.get<double>();
        else if (k == "temperature") c.training.temperature = x.get<double>();
        else if (k == "include_positive_in_denominator") c.training.include_positive_in_denominator = x.get<bool>();
        else return false;
        return true;
      });
    } else if (key == "sampler") {
      for_each_key(v, "sampler", [&](const std::string& k, const json& x) {
        if (k == "positives") c.sampler.positives = x.get<int>();
        else if (k == "negatives") c.sampler.negatives = x.get<int>();
        else if (k == "house_heuristic") c.sampler.house_heuristic = x.get<bool>();
        else if (k == "paraphraser") c.sampler.paraphraser = x.get<std::string>();
        else if (k == "reorder_clauses") c.sampler.reorder_clauses = x.get<bool>();
        else if (k == "substitution_rate") c.sampler.substitution_rate = x.get<double>();
        else if (k == "paraphraser_endpoint") c.sampler.paraphraser_endpoint = x.get<std::string>();
        else if (k == "paraphraser_timeout_ms") c.sampler.paraphraser_timeout_ms = x.get<int>();
        else return false;
        return true;
      });
    } else if (key == "scorer") {
      for_each_key(v, "scorer", [&](const std::string& k, const json& x) {
        if (k == "name") c.scorer.name = x.get<std::string>();
        else if (k == "stopwords") c.scorer.stopwords = resolve(base, x.get<std::string>());
        else if (k == "buckets") c.scorer.buckets = x.get<int>();
        else if (k == "endpoint") c.scorer.endpoint = x.get<std::string>();
        else if (k == "remote_name") c.scorer.remote_name = x.get<std::string>();
        else if (k == "timeout_ms") c.scorer.timeout_ms = x.get<int>();
        else return false;
        return true;
      });
    } else if (key == "judge") {
      for_each_key(v, "judge", [&](const std::string& k, const json& x) {
        if (k == "kind") c.judge.kind = x.get<std::string>();
        else if (k == "fixture") c.judge.fixture = resolve(base, x.get<std::string>());
        else if (k == "templates") c.judge.templates = resolve(base, x.get<std::string>());
        else if (k == "fluency") c.judge.fluency = x.get<bool>();
        else if (k == "remote") c.judge.remote = eval::RemoteJudgeConfig::from_json(x);
        else return false;
        return true;
      });
    } else if (key == "decode") {
      c.decode = model::DecodeOptions::from_json(v);
    } else if (key == "eval") {
      for_each_key(v, "eval", [&](const std::string& k, const json& x) {
        if (k == "split") c.eval.split = x.get<std::string>();
        else if (k == "max_samples") c.eval.max_samples = x.get<std::size_t>();
        else return false;
        return true;
      });
    } else if (key == "output_dir") {
      c.output_dir = resolve(base, v.get<std::string>());
    } else {
      return false;
    }
    return true;
  });
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  json j;
  try {
    j = read_json(path);
  } catch (const Error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  return from_json(j, path.parent_path());
}

void RunConfig::validate() const {
  if (data.train.empty()) throw ConfigError("data.train is required");
  auto probe = model;
  probe.vocab_size = 16;
  probe.validate();
  if (training.epochs < 1) throw ConfigError("training.epochs must be at least 1");
  if (!(training.temperature > 0.0)) throw ConfigError("training.temperature must be positive");
  if (training.contrastive_weight < 0.0) throw ConfigError("training.contrastive_weight must be non-negative");
  if (sampler.positives < 1 || sampler.negatives < 1) throw ConfigError("sampler counts must be at least 1");
  if (sampler.paraphraser != "offline" && sampler.paraphraser != "remote") {
    throw ConfigError("sampler.paraphraser must be 'offline' or 'remote'");
  }
  if (sampler.paraphraser == "remote" && sampler.paraphraser_endpoint.empty()) {
    throw ConfigError("sampler.paraphraser_endpoint is required for the remote paraphraser");
  }
  if (sampler.substitution_rate < 0.0 || sampler.substitution_rate > 1.0) {
    throw ConfigError("sampler.substitution_rate must lie in [0, 1]");
  }
  if (scorer.name != "lexical-overlap" && scorer.name != "remote") {
    throw ConfigError("scorer.name must be 'lexical-overlap' or 'remote'");
  }
  if (scorer.name == "remote" && scorer.endpoint.empty()) throw ConfigError("scorer.endpoint is required");
  if (scorer.buckets != 3) throw ConfigError("scorer.buckets must be 3");
  if (judge.kind != "mock" && judge.kind != "remote") throw ConfigError("judge.kind must be 'mock' or 'remote'");
  if (eval.split != "train" && eval.split != "valid" && eval.split != "test") {
    throw ConfigError("eval.split must be train, valid or test");
  }
  if (static_cast<int>(decode.max_length) > model.max_target_length) {
    throw ConfigError("decode.max_length exceeds model.max_target_length");
  }
}

std::string RunConfig::hash() const { return sha256_hex(to_json().dump()); }

}  // namespace faithgen::pipeline
