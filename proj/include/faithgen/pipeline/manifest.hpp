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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace faithgen::pipeline {

struct ArtifactRecord {
  /// Relative to the run directory when inside it.
  std::string path;
  std::string sha256;
};

struct StageRecord {
  std::string stage;
  /// Hash of the stage's configuration and input hashes.
  std::string key;
  std::string config_hash;
  std::vector<ArtifactRecord> inputs;
  std::vector<ArtifactRecord> outputs;
  std::string started;
  std::string finished;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
  static StageRecord from_json(const nlohmann::json& j);
};

/// manifest.json of a run directory: one record per completed stage.
class Manifest {
 public:
  static constexpr const char* kFileName = "manifest.json";

  /// Reads <run_dir>/manifest.json, or starts an empty manifest.
  static Manifest load(const std::filesystem::path& run_dir);
  void save() const;

  const std::filesystem::path& run_dir() const noexcept { return run_dir_; }
  const std::map<std::string, StageRecord>& stages() const noexcept { return stages_; }
  const StageRecord* find(const std::string& stage) const;
  /// The stage's record; throws UpstreamMissingError naming the stage when it
  /// has not run or one of its outputs is missing or modified.
  const StageRecord& require(const std::string& stage, const std::string& command) const;
  void put(StageRecord record);

  /// True when `stage` ran with `key` and its outputs are intact.
  bool up_to_date(const std::string& stage, const std::string& key) const;

  ArtifactRecord artifact(const std::filesystem::path& path) const;
  std::filesystem::path resolve(const std::string& recorded) const;
  std::string config_hash;

 private:
  bool intact(const StageRecord& record) const;

  std::filesystem::path run_dir_;
  std::map<std::string, StageRecord> stages_;
};

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

}  // namespace faithgen::pipeline
