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

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "faithgen/kg/graph.hpp"
#include "faithgen/kg/tokenize.hpp"
#include "json.hpp"

namespace faithgen::kg {

/// Reads a JSONL dataset: {"id", "triples": [[h, r, t], ...], "text"}.
/// "text" is required except for the test split. Throws DataError naming
/// file:line on any schema violation, or on a duplicate id.
std::vector<TextSample> load_dataset(const std::filesystem::path& path, Split split);

nlohmann::json sample_to_json(const TextSample& sample);

void save_dataset(const std::filesystem::path& path, std::span<const TextSample> samples);

struct DatasetStats {
  std::size_t samples = 0;
  std::size_t triples = 0;
  std::size_t entities = 0;  // distinct across the dataset
  std::size_t with_reference = 0;
  std::map<std::string, std::size_t> relation_counts;

  std::size_t relation_count() const noexcept { return relation_counts.size(); }
  nlohmann::json to_json() const;
};

DatasetStats compute_stats(std::span<const TextSample> samples);

/// Vocabulary over reference texts and graph fields of `samples`.
Vocabulary build_vocabulary(std::span<const TextSample> samples);

}  // namespace faithgen::kg
