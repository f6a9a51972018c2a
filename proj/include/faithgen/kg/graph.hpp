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

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace faithgen::kg {

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;

  auto operator<=>(const Triple&) const = default;
};

/// An entity/relation graph with ordered triples. Triple order is significant:
/// it fixes the linearization and therefore the model input.
class KGGraph {
 public:
  KGGraph() = default;

  /// Builds a graph whose entity list is the heads and tails in order of
  /// first appearance. Throws DataError on invalid fields or duplicate triples.
  static KGGraph from_triples(std::vector<Triple> triples);

  /// Explicit entity list; every head/tail must appear in it.
  KGGraph(std::vector<std::string> entities, std::vector<Triple> triples);

  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  bool empty() const noexcept { return triples_.empty(); }
  std::size_t size() const noexcept { return triples_.size(); }

  std::set<std::string> relation_labels() const;

  /// Tails of every triple carrying `relation`, in order.
  std::vector<std::string> tails_of(std::string_view relation) const;

  bool operator==(const KGGraph&) const = default;

 private:
  std::vector<std::string> entities_;
  std::vector<Triple> triples_;
};

/// Checks that a head/relation/tail string can be linearized and parsed back
/// unchanged: non-empty, no surrounding whitespace, and no marker or tag words.
/// Returns a description of the problem, or nullopt if the field is valid.
std::optional<std::string> field_problem(std::string_view field);

enum class Split { train, valid, test };

std::string_view to_string(Split split);
Split split_from_string(std::string_view name);

struct TextSample {
  std::string id;
  KGGraph graph;
  std::optional<std::string> reference;
  Split split = Split::train;
};

}  // namespace faithgen::kg
