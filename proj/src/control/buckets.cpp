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

#include "faithgen/control/buckets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "faithgen/common/error.hpp"
#include "faithgen/common/jsonl.hpp"

namespace faithgen::control {

const BucketEntry& BucketAssignment::at(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw DataError("sample '" + id + "' has no bucket assignment");
  return entries[it->second];
}

void BucketAssignment::index() {
  by_id_.clear();
  sizes = {};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    by_id_[entries[i].id] = i;
    const auto b = static_cast<std::size_t>(entries[i].tag);
    if (sizes[b] == 0) {
      ranges[b] = {entries[i].score, entries[i].score};
    } else {
      ranges[b].first = std::max(ranges[b].first, entries[i].score);
      ranges[b].second = std::min(ranges[b].second, entries[i].score);
    }
    ++sizes[b];
  }
}

nlohmann::json BucketAssignment::summary() const {
  json buckets = json::array();
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    buckets.push_back({{"tag", tag_name(kAllTags[b])},
                       {"size", sizes[b]},
                       {"max_score", ranges[b].first},
                       {"min_score", ranges[b].second}});
  }
  return {{"scorer", scorer}, {"samples", entries.size()}, {"tag_position", "prepend"}, {"buckets", buckets}};
}

BucketAssignment assign_buckets(std::span<const FaithfulnessScore> scores) {
  if (scores.size() < kBucketCount) {
    throw DataError("bucketing needs at least 3 scored samples, got " + std::to_string(scores.size()));
  }
  BucketAssignment out;
  out.scorer = scores.front().scorer_name;
  std::set<std::string> ids;
  for (const auto& s : scores) {
    if (s.scorer_name != out.scorer) {
      throw DataError("scores from different scorers ('" + out.scorer + "', '" + s.scorer_name +
                      "') cannot be bucketed together");
    }
    if (!std::isfinite(s.score)) throw DataError("non-finite score for '" + s.sample_id + "'");
    if (!ids.insert(s.sample_id).second) throw DataError("duplicate sample id '" + s.sample_id + "' in scores");
    out.entries.push_back({s.sample_id, s.score, HallucinationTag::low});
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const BucketEntry& a, const BucketEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  const std::size_t n = out.entries.size();
  const std::size_t q = n / kBucketCount;
  const std::size_t r = n % kBucketCount;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    const std::size_t size = q + (b < r ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) out.entries[pos++].tag = kAllTags[b];
  }
  out.index();
  return out;
}

void write_bucket_file(const std::filesystem::path& path, const BucketAssignment& assignment) {
  std::vector<json> rows;
  rows.reserve(assignment.entries.size());
  for (const auto& e : assignment.entries) {
    rows.push_back({{"id", e.id}, {"score", e.score}, {"scorer", assignment.scorer}, {"tag", tag_name(e.tag)}});
  }
  write_jsonl(path, rows);
}

BucketAssignment read_bucket_file(const std::filesystem::path& path) {
  BucketAssignment out;
  for_each_jsonl(path, [&](const json& row, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    try {
      BucketEntry e{row.at("id").get<std::string>(), row.at("score").get<double>(),
                    tag_from_string(row.at("tag").get<std::string>())};
      const auto scorer = row.at("scorer").get<std::string>();
      if (out.entries.empty()) out.scorer = scorer;
      if (scorer != out.scorer) throw DataError(where + ": mixed scorers in bucket file");
      out.entries.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    } catch (const ConfigError& e) {
      throw DataError(where + ": " + e.what());
    }
  });
  out.index();
  return out;
}

}  // namespace faithgen::control
