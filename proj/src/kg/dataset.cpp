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

#include "faithgen/kg/dataset.hpp"

#include <set>
#include <unordered_set>

#include "faithgen/common/error.hpp"
#include "faithgen/common/jsonl.hpp"

namespace faithgen::kg {

namespace {

TextSample sample_from_json(const json& obj, Split split, const std::string& where) {
  auto fail = [&](const std::string& msg) -> DataError { return DataError(where + ": " + msg); };
  if (!obj.is_object()) throw fail("line is not a JSON object");

  TextSample sample;
  sample.split = split;
  const auto id = obj.find("id");
  if (id == obj.end() || !id->is_string()) throw fail("missing string field 'id'");
  sample.id = id->get<std::string>();
  if (sample.id.empty()) throw fail("empty 'id'");

  const auto triples = obj.find("triples");
  if (triples == obj.end() || !triples->is_array()) throw fail("missing array field 'triples'");
  std::vector<Triple> parsed;
  parsed.reserve(triples->size());
  for (std::size_t i = 0; i < triples->size(); ++i) {
    const json& t = (*triples)[i];
    if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() || !t[2].is_string()) {
      throw fail("triples[" + std::to_string(i) + "] must be [head, relation, tail] strings");
    }
    parsed.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
  }
  if (parsed.empty()) throw fail("'triples' is empty");
  try {
    sample.graph = KGGraph::from_triples(std::move(parsed));
  } catch (const DataError& e) {
    throw fail(e.what());
  }

  const auto text = obj.find("text");
  if (text != obj.end() && !text->is_null()) {
    if (!text->is_string()) throw fail("'text' must be a string");
    sample.reference = text->get<std::string>();
  }
  if (split != Split::test && (!sample.reference || sample.reference->find_first_not_of(" \t\r\n") == std::string::npos)) {
    throw fail("missing non-empty 'text' (required outside the test split)");
  }
  return sample;
}

}  // namespace

std::vector<TextSample> load_dataset(const std::filesystem::path& path, Split split) {
  std::vector<TextSample> samples;
  std::unordered_set<std::string> ids;
  for_each_jsonl(path, [&](const json& obj, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    TextSample sample = sample_from_json(obj, split, where);
    if (!ids.insert(sample.id).second) throw DataError(where + ": duplicate id '" + sample.id + "'");
    samples.push_back(std::move(sample));
  });
  return samples;
}

nlohmann::json sample_to_json(const TextSample& sample) {
  json triples = json::array();
  for (const Triple& t : sample.graph.triples()) triples.push_back({t.head, t.relation, t.tail});
  json obj = {{"id", sample.id}, {"triples", std::move(triples)}};
  if (sample.reference) obj["text"] = *sample.reference;
  return obj;
}

void save_dataset(const std::filesystem::path& path, std::span<const TextSample> samples) {
  std::vector<json> rows;
  rows.reserve(samples.size());
  for (const TextSample& s : samples) rows.push_back(sample_to_json(s));
  write_jsonl(path, rows);
}

nlohmann::json DatasetStats::to_json() const {
  return {{"samples", samples},
          {"triples", triples},
          {"entities", entities},
          {"with_reference", with_reference},
          {"relations", relation_count()},
          {"relation_counts", relation_counts}};
}

DatasetStats compute_stats(std::span<const TextSample> samples) {
  DatasetStats stats;
  std::set<std::string> entities;
  for (const TextSample& s : samples) {
    ++stats.samples;
    if (s.reference) ++stats.with_reference;
    stats.triples += s.graph.size();
    for (const std::string& e : s.graph.entities()) entities.insert(e);
    for (const Triple& t : s.graph.triples()) ++stats.relation_counts[t.relation];
  }
  stats.entities = entities.size();
  return stats;
}

Vocabulary build_vocabulary(std::span<const TextSample> samples) {
  Vocabulary vocab;
  for (const TextSample& s : samples) {
    for (const Triple& t : s.graph.triples()) {
      for (const std::string* field : {&t.head, &t.relation, &t.tail}) {
        for (const std::string& tok : split_text(*field)) vocab.add(tok);
      }
    }
    if (s.reference) {
      for (const std::string& tok : split_text(*s.reference)) vocab.add(tok);
    }
  }
  return vocab;
}

}  // namespace faithgen::kg
