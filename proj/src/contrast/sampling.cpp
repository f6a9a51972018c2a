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

#include "faithgen/contrast/sampling.hpp"

#include <algorithm>
#include <random>

#include "faithgen/common/error.hpp"
#include "faithgen/common/hash.hpp"
#include "faithgen/common/jsonl.hpp"

namespace faithgen::contrast {

namespace {

// Pool members usable as negatives for `anchor`, ordered by id.
std::vector<const kg::TextSample*> candidates_for(const kg::TextSample& anchor,
                                                  std::span<const kg::TextSample> pool) {
  std::vector<const kg::TextSample*> out;
  for (const auto& s : pool) {
    if (s.id != anchor.id && s.reference) out.push_back(&s);
  }
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  return out;
}

// Partial Fisher-Yates: the first `count` entries become a uniform sample.
template <typename Item>
void draw_prefix(std::vector<Item>& items, std::size_t count, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
}

void require(std::size_t available, std::size_t count, const std::string& anchor_id) {
  if (available < count) {
    throw DataError("negative sampling for '" + anchor_id + "' needs " + std::to_string(count) +
                    " candidates, only " + std::to_string(available) + " available");
  }
}

NegativeSample to_negative(const kg::TextSample* s) { return {s->id, *s->reference}; }

}  // namespace

std::vector<NegativeSample> make_negatives_random(const kg::TextSample& anchor,
                                                  std::span<const kg::TextSample> pool, std::size_t count,
                                                  std::uint64_t seed) {
  auto candidates = candidates_for(anchor, pool);
  require(candidates.size(), count, anchor.id);
  std::mt19937_64 rng(mix_seed(seed, fnv1a64(anchor.id)));
  draw_prefix(candidates, count, rng);
  std::vector<NegativeSample> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(to_negative(candidates[i]));
  return out;
}

MajorFeatureProfile MajorFeatureProfile::from_graph(const kg::KGGraph& graph, const MajorFeatureLabels& labels) {
  MajorFeatureProfile profile;
  for (std::size_t f = 0; f < labels.relations.size(); ++f) {
    const auto tails = graph.tails_of(labels.relations[f]);
    if (tails.size() == 1) profile.values[f] = tails.front();
  }
  return profile;
}

bool house_eligible(const MajorFeatureProfile& anchor, const MajorFeatureProfile& candidate, std::size_t min_shared) {
  std::size_t shared = 0;
  for (std::size_t f = 0; f < anchor.values.size(); ++f) {
    if (!anchor.values[f] || !candidate.values[f]) continue;
    if (*anchor.values[f] == *candidate.values[f]) return false;
    ++shared;
  }
  return shared >= min_shared;
}

std::vector<NegativeSample> make_negatives_house(const kg::TextSample& anchor,
                                                 std::span<const kg::TextSample> pool, std::size_t count,
                                                 std::uint64_t seed, const MajorFeatureLabels& labels) {
  const auto candidates = candidates_for(anchor, pool);
  require(candidates.size(), count, anchor.id);
  const auto anchor_profile = MajorFeatureProfile::from_graph(anchor.graph, labels);
  std::vector<const kg::TextSample*> eligible, rest;
  for (const auto* c : candidates) {
    (house_eligible(anchor_profile, MajorFeatureProfile::from_graph(c->graph, labels)) ? eligible : rest).push_back(c);
  }
  std::mt19937_64 rng(mix_seed(seed, fnv1a64(anchor.id)));
  std::vector<NegativeSample> out;
  const std::size_t from_eligible = std::min(count, eligible.size());
  draw_prefix(eligible, from_eligible, rng);
  for (std::size_t i = 0; i < from_eligible; ++i) out.push_back(to_negative(eligible[i]));
  if (from_eligible < count) {
    draw_prefix(rest, count - from_eligible, rng);
    for (std::size_t i = 0; i < count - from_eligible; ++i) out.push_back(to_negative(rest[i]));
  }
  return out;
}

nlohmann::json ContrastiveSet::to_json() const {
  json negs = json::array();
  for (const auto& n : negatives) negs.push_back({{"id", n.id}, {"text", n.text}});
  return {{"anchor_id", anchor_id}, {"positives", positives}, {"negatives", negs}};
}

ContrastiveSet ContrastiveSet::from_json(const nlohmann::json& j) {
  ContrastiveSet set;
  set.anchor_id = j.at("anchor_id").get<std::string>();
  set.positives = j.at("positives").get<std::vector<std::string>>();
  for (const auto& n : j.at("negatives")) set.negatives.push_back({n.at("id").get<std::string>(), n.at("text").get<std::string>()});
  for (const auto& n : set.negatives) {
    if (n.id == set.anchor_id) throw DataError("contrastive set for '" + set.anchor_id + "' lists the anchor as a negative");
  }
  return set;
}

void write_contrastive_sets(const std::filesystem::path& path, std::span<const ContrastiveSet> sets) {
  std::vector<json> rows;
  rows.reserve(sets.size());
  for (const auto& s : sets) rows.push_back(s.to_json());
  write_jsonl(path, rows);
}

std::vector<ContrastiveSet> read_contrastive_sets(const std::filesystem::path& path) {
  std::vector<ContrastiveSet> out;
  for_each_jsonl(path, [&](const json& row, std::size_t line) {
    try {
      out.push_back(ContrastiveSet::from_json(row));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace faithgen::contrast
