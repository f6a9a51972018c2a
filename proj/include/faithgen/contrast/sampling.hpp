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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faithgen/kg/graph.hpp"
#include "json.hpp"

namespace faithgen::contrast {

struct NegativeSample {
  std::string id;
  std::string text;

  bool operator==(const NegativeSample&) const = default;
};

/// `count` references drawn uniformly without replacement from the pool
/// minus the anchor (and minus samples without a reference). Candidates are
/// ordered by id before drawing, so the result depends only on (seed, anchor
/// id, pool ids). Throws DataError naming required vs available counts.
std::vector<NegativeSample> make_negatives_random(const kg::TextSample& anchor,
                                                  std::span<const kg::TextSample> pool, std::size_t count,
                                                  std::uint64_t seed);

/// Relation labels that carry the six major house features, in the order
/// location, address, bedrooms, bathrooms, parking spaces, property type.
struct MajorFeatureLabels {
  std::array<std::string, 6> relations = {"house_location", "house_address", "bedrooms",
                                          "bathrooms",      "parking spaces", "house_property-type"};
};

struct MajorFeatureProfile {
  /// Absent when the graph has zero or several triples with that relation.
  std::array<std::optional<std::string>, 6> values;

  static MajorFeatureProfile from_graph(const kg::KGGraph& graph, const MajorFeatureLabels& labels = {});
};

inline constexpr std::size_t kMinSharedFeatures = 4;

/// A candidate may serve as a house negative iff at least `min_shared`
/// features are present in both profiles and every such feature differs.
bool house_eligible(const MajorFeatureProfile& anchor, const MajorFeatureProfile& candidate,
                    std::size_t min_shared = kMinSharedFeatures);

/// Draws uniformly from house-eligible candidates; when fewer than `count`
/// are eligible, all of them are taken and the rest is topped up at random
/// from the remaining pool.
std::vector<NegativeSample> make_negatives_house(const kg::TextSample& anchor,
                                                 std::span<const kg::TextSample> pool, std::size_t count,
                                                 std::uint64_t seed, const MajorFeatureLabels& labels = {});

struct ContrastiveSet {
  std::string anchor_id;
  std::vector<std::string> positives;
  std::vector<NegativeSample> negatives;

  nlohmann::json to_json() const;
  static ContrastiveSet from_json(const nlohmann::json& j);
};

void write_contrastive_sets(const std::filesystem::path& path, std::span<const ContrastiveSet> sets);
std::vector<ContrastiveSet> read_contrastive_sets(const std::filesystem::path& path);

}  // namespace faithgen::contrast
