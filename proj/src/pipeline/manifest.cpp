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

#include "faithgen/pipeline/manifest.hpp"

#include <chrono>
#include <ctime>

#include "faithgen/common/error.hpp"
#include "faithgen/common/hash.hpp"
#include "faithgen/common/jsonl.hpp"

namespace faithgen::pipeline {

namespace {

json artifacts_to_json(const std::vector<ArtifactRecord>& items) {
  json out = json::array();
  for (const auto& a : items) out.push_back({{"path", a.path}, {"sha256", a.sha256}});
  return out;
}

std::vector<ArtifactRecord> artifacts_from_json(const json& j) {
  std::vector<ArtifactRecord> out;
  for (const auto& a : j) out.push_back({a.at("path").get<std::string>(), a.at("sha256").get<std::string>()});
  return out;
}

}  // namespace

json StageRecord::to_json() const {
  return {{"stage", stage},     {"key", key},         {"config_hash", config_hash},
          {"inputs", artifacts_to_json(inputs)},      {"outputs", artifacts_to_json(outputs)},
          {"started", started}, {"finished", finished}, {"details", details}};
}

StageRecord StageRecord::from_json(const json& j) {
  StageRecord r;
  r.stage = j.at("stage").get<std::string>();
  r.key = j.at("key").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.inputs = artifacts_from_json(j.at("inputs"));
  r.outputs = artifacts_from_json(j.at("outputs"));
  r.started = j.at("started").get<std::string>();
  r.finished = j.at("finished").get<std::string>();
  r.details = j.value("details", json::object());
  return r;
}

Manifest Manifest::load(const std::filesystem::path& run_dir) {
  Manifest m;
  m.run_dir_ = run_dir;
  const auto path = run_dir / kFileName;
  if (!std::filesystem::exists(path)) return m;
  try {
    const json j = read_json(path);
    m.config_hash = j.value("config_hash", std::string());
    for (const auto& s : j.at("stages")) {
      auto r = StageRecord::from_json(s);
      m.stages_[r.stage] = std::move(r);
    }
  } catch (const json::exception& e) {
    throw DataError("corrupt manifest " + path.string() + ": " + e.what());
  }
  return m;
}

void Manifest::save() const {
  json stages = json::array();
  for (const auto& [name, record] : stages_) stages.push_back(record.to_json());
  write_json(run_dir_ / kFileName, {{"config_hash", config_hash}, {"stages", stages}});
}

const StageRecord* Manifest::find(const std::string& stage) const {
  const auto it = stages_.find(stage);
  return it == stages_.end() ? nullptr : &it->second;
}

const StageRecord& Manifest::require(const std::string& stage, const std::string& command) const {
  const StageRecord* r = find(stage);
  if (r == nullptr) {
    throw UpstreamMissingError("missing upstream stage '" + stage + "' in " + run_dir_.string() + "; run `faithgen " +
                               command + "` first");
  }
  if (!intact(*r)) {
    throw UpstreamMissingError("artifacts of stage '" + stage + "' are missing or modified; rerun `faithgen " +
                               command + "`");
  }
  return *r;
}

void Manifest::put(StageRecord record) {
  const std::string name = record.stage;
  stages_[name] = std::move(record);
}

bool Manifest::intact(const StageRecord& record) const {
  for (const auto& a : record.inputs) {
    const auto p = resolve(a.path);
    if (!std::filesystem::exists(p) || sha256_file(p) != a.sha256) return false;
  }
  for (const auto& a : record.outputs) {
    const auto p = resolve(a.path);
    if (!std::filesystem::exists(p) || sha256_file(p) != a.sha256) return false;
  }
  return true;
}

bool Manifest::up_to_date(const std::string& stage, const std::string& key) const {
  const StageRecord* r = find(stage);
  return r != nullptr && r->key == key && intact(*r);
}

ArtifactRecord Manifest::artifact(const std::filesystem::path& path) const {
  const auto canonical_run = std::filesystem::weakly_canonical(run_dir_);
  const auto canonical = std::filesystem::weakly_canonical(path);
  auto rel = canonical.lexically_relative(canonical_run);
  std::string recorded = (!rel.empty() && *rel.begin() != "..") ? rel.generic_string() : canonical.generic_string();
  return {recorded, sha256_file(path)};
}

std::filesystem::path Manifest::resolve(const std::string& recorded) const {
  std::filesystem::path p(recorded);
  return p.is_absolute() ? p : run_dir_ / p;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace faithgen::pipeline
