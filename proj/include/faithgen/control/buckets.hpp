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

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "faithgen/control/scorer.hpp"
#include "faithgen/control/tags.hpp"
#include "json.hpp"

namespace faithgen::control {

inline constexpr std::size_t kBucketCount = 3;

struct BucketEntry {
  std::string id;
  double score = 0.0;
  HallucinationTag tag = HallucinationTag::low;
};

struct BucketAssignment {
  std::string scorer;
  /// Sorted by (score descending, id ascending); buckets are contiguous runs.
  std::vector<BucketEntry> entries;
  std::array<std::size_t, kBucketCount> sizes{};
  /// Highest and lowest score in each bucket, Hal_low first.
  std::array<std::pair<double, double>, kBucketCount> ranges{};

  const BucketEntry& at(const std::string& id) const;
  HallucinationTag tag_of(const std::string& id) const { return at(id).tag; }

  /// Metadata for the run directory: scorer, sizes, ranges, tag position.
  nlohmann::json summary() const;

 private:
  friend BucketAssignment assign_buckets(std::span<const FaithfulnessScore> scores);
  friend BucketAssignment read_bucket_file(const std::filesystem::path& path);
  void index();
  std::map<std::string, std::size_t> by_id_;
};

/// Splits scored samples into three near-equal buckets: with n = 3q + r the
/// first r buckets receive q + 1 samples. Ties are broken by id ascending so
/// the result does not depend on input order. Throws DataError for n < 3,
/// mixed scorers, duplicate ids, or non-finite scores.
BucketAssignment assign_buckets(std::span<const FaithfulnessScore> scores);

/// JSONL rows {"id", "score", "scorer", "tag"} in bucket order.
void write_bucket_file(const std::filesystem::path& path, const BucketAssignment& assignment);
BucketAssignment read_bucket_file(const std::filesystem::path& path);

}  // namespace faithgen::control
