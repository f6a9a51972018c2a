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

#include "faithgen/kg/graph.hpp"

#include <algorithm>
#include <unordered_set>

#include "faithgen/common/error.hpp"
#include "faithgen/kg/tokenize.hpp"

namespace faithgen::kg {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

void validate(const std::vector<std::string>& entities, const std::vector<Triple>& triples) {
  std::set<Triple> seen;
  const std::unordered_set<std::string> entity_set(entities.begin(), entities.end());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    for (const std::string* field : {&t.head, &t.relation, &t.tail}) {
      if (auto problem = field_problem(*field)) {
        throw DataError("triple " + std::to_string(i) + ": " + *problem);
      }
    }
    if (!entity_set.contains(t.head) || !entity_set.contains(t.tail)) {
      throw DataError("triple " + std::to_string(i) + " references an entity outside the entity list");
    }
    if (!seen.insert(t).second) {
      throw DataError("duplicate triple (" + t.head + ", " + t.relation + ", " + t.tail + ")");
    }
  }
}

}  // namespace

std::optional<std::string> field_problem(std::string_view field) {
  if (field.empty()) return "empty field";
  if (is_space(field.front()) || is_space(field.back())) {
    return "field '" + std::string(field) + "' has surrounding whitespace";
  }
  std::size_t pos = 0;
  while (pos < field.size()) {
    while (pos < field.size() && is_space(field[pos])) ++pos;
    std::size_t end = pos;
    while (end < field.size() && !is_space(field[end])) ++end;
    const std::string_view word = field.substr(pos, end - pos);
    const auto& reserved = Vocabulary::reserved_tokens();
    if (std::find(reserved.begin() + Vocabulary::kHead, reserved.end(), word) != reserved.end()) {
      return "field '" + std::string(field) + "' contains the reserved word '" + std::string(word) + "'";
    }
    pos = end;
  }
  return std::nullopt;
}

KGGraph KGGraph::from_triples(std::vector<Triple> triples) {
  std::vector<std::string> entities;
  std::unordered_set<std::string> seen;
  for (const Triple& t : triples) {
    for (const std::string* e : {&t.head, &t.tail}) {
      if (seen.insert(*e).second) entities.push_back(*e);
    }
  }
  return KGGraph(std::move(entities), std::move(triples));
}

KGGraph::KGGraph(std::vector<std::string> entities, std::vector<Triple> triples)
    : entities_(std::move(entities)), triples_(std::move(triples)) {
  validate(entities_, triples_);
}

std::set<std::string> KGGraph::relation_labels() const {
  std::set<std::string> labels;
  for (const Triple& t : triples_) labels.insert(t.relation);
  return labels;
}

std::vector<std::string> KGGraph::tails_of(std::string_view relation) const {
  std::vector<std::string> tails;
  for (const Triple& t : triples_) {
    if (t.relation == relation) tails.push_back(t.tail);
  }
  return tails;
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "train";
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "valid") return Split::valid;
  if (name == "test") return Split::test;
  throw ConfigError("unknown split '" + std::string(name) + "'");
}

}  // namespace faithgen::kg
