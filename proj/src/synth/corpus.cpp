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

#include "faithgen/synth/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "faithgen/common/error.hpp"

namespace faithgen::synth {

namespace {

const std::vector<std::string> kSuburbs = {
    "niddrie",    "essendon",  "ascot",      "brunswick", "coburg",   "preston", "northcote", "thornbury",
    "reservoir",  "glenroy",   "pascoe",     "keilor",    "moonee",   "kensington", "footscray", "yarraville",
    "seddon",     "williamstown", "altona",  "sunshine",  "hawthorn", "kew",     "camberwell", "balwyn",
    "doncaster",  "box",       "burwood",    "malvern",   "carnegie", "bentleigh"};
const std::vector<std::string> kPropertyTypes = {"townhouse", "apartment", "unit", "villa", "cottage", "duplex"};
const std::vector<std::string> kStations = {"glenroy", "oak", "strathmore", "pascoe", "essendon", "moonee", "ascot", "newmarket"};
const std::vector<std::string> kStreets = {"rosehill", "hoffmans", "keilor", "buckley", "napier", "mount", "pascoe", "lincoln"};

std::string pick(const std::vector<std::string>& pool, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

std::string number(int lo, int hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(lo, hi);
  return std::to_string(d(rng));
}

// Steering relations: label, value generator, sentence template ({v} slot).
struct SteeringRelation {
  std::string label;
  std::vector<std::string> values;
  std::string before;  // words before the value
  std::string after;   // words after the value
};

const std::vector<SteeringRelation>& steering_relations() {
  static const std::vector<SteeringRelation> kRelations = {
      {"house_location", kSuburbs, "located in", ""},
      {"house_property-type", kPropertyTypes, "this", ""},
      {"bedrooms", {"1", "2", "3", "4", "5", "6"}, "", "bedrooms"},
      {"bathrooms", {"1", "2", "3", "4"}, "", "bathrooms"},
      {"parking spaces", {"1", "2", "3", "4"}, "", "parking spaces"},
      {"cooling", {"ducted", "split-system", "evaporative", "reverse-cycle"}, "", "cooling"},
      {"heating", {"gas", "hydronic", "electric", "central"}, "", "heating"},
      {"garage", {"single", "double", "triple", "tandem"}, "", "garage"},
      {"station", kStations, "", "station"},
      {"land", {"400", "450", "500", "550", "600", "650", "700", "750", "800"}, "", "land"},
      {"floors", {"timber", "tiled", "carpeted", "polished"}, "", "floors"},
      {"kitchen", {"gourmet", "galley", "open-plan", "stone"}, "", "kitchen"},
      {"outdoor", {"deck", "patio", "courtyard", "garden"}, "", "outdoor"},
      {"storeys", {"1", "2", "3"}, "", "storeys"},
  };
  return kRelations;
}

const SteeringRelation& steering_relation(const std::string& label) {
  for (const auto& r : steering_relations()) {
    if (r.label == label) return r;
  }
  throw DataError("no verbalization template for relation '" + label + "'");
}

std::string sentence_for(const kg::Triple& t) {
  const auto& rel = steering_relation(t.relation);
  std::string s;
  if (!rel.before.empty()) s += rel.before + " ";
  s += t.tail;
  if (!rel.after.empty()) s += " " + rel.after;
  return s + " .";
}

}  // namespace

const std::vector<std::string>& house_relations() {
  static const std::vector<std::string> kRelations = [] {
    std::vector<std::string> r = {"house_location", "house_property-type", "bedrooms", "bathrooms",
                                  "parking spaces", "has_ac", "has_dining", "has_heating",
                                  "garage_spaces", "nearest_train_station", "house_address"};
    const std::vector<std::string> extra = {
        "has_pool", "has_garden", "has_balcony", "has_study", "has_ensuite", "has_alarm", "has_intercom",
        "has_fireplace", "has_dishwasher", "has_laundry", "has_shed", "has_deck", "has_courtyard", "has_gym",
        "has_sauna", "has_spa", "has_solar", "has_rainwater_tank", "has_workshop", "has_cellar", "has_attic",
        "has_walk_in_robe", "has_built_in_robes", "has_floorboards", "has_carpet", "has_tiles", "has_skylight",
        "has_ducted_vacuum", "has_water_views", "has_city_views", "land_size", "building_size", "year_built",
        "floor_count", "nearest_school", "nearest_park", "nearest_shops", "nearest_bus_stop", "nearest_beach",
        "council", "zoning", "aspect", "frontage", "depth", "rates", "water_rates", "strata_fees", "agent",
        "agency", "auction_date", "price_guide", "sale_method", "inspection_time", "kitchen_style",
        "heating_type", "cooling_type", "roof_type"};
    r.insert(r.end(), extra.begin(), extra.end());
    return r;
  }();
  return kRelations;
}

const std::vector<std::string>& house_salient_relations() {
  static const std::vector<std::string> kSalient(house_relations().begin(), house_relations().begin() + 10);
  return kSalient;
}

std::vector<kg::TextSample> house_corpus(std::size_t samples, std::uint64_t seed, kg::Split split) {
  if (samples < 20) throw DataError("house corpus needs at least 20 samples");
  const auto& relations = house_relations();
  std::mt19937_64 rng(seed);

  // Exact occurrence counts: the ten salient labels and the address strictly
  // decreasing from 97% coverage, the remaining labels strictly below.
  const double n = static_cast<double>(samples);
  const std::vector<double> head_fractions = {0.97, 0.95, 0.93, 0.92, 0.91, 0.80, 0.75, 0.70, 0.65, 0.60, 0.55};
  std::vector<std::size_t> counts;
  for (double f : head_fractions) counts.push_back(static_cast<std::size_t>(f * n));
  std::uniform_real_distribution<double> tail_fraction(0.05, 0.45);
  for (std::size_t k = head_fractions.size(); k < relations.size(); ++k) {
    counts.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(tail_fraction(rng) * n)));
  }

  std::vector<std::vector<std::string>> features(samples);
  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < relations.size(); ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < counts[k]; ++i) features[order[i]].push_back(relations[k]);
  }

  auto value_for = [&](const std::string& rel) -> std::string {
    if (rel == "house_location") return pick(kSuburbs, rng);
    if (rel == "house_property-type") return pick(kPropertyTypes, rng);
    if (rel == "bedrooms") return number(1, 6, rng);
    if (rel == "bathrooms") return number(1, 4, rng);
    if (rel == "parking spaces" || rel == "garage_spaces") return number(0, 4, rng);
    if (rel == "nearest_train_station") return pick(kStations, rng) + " station";
    if (rel == "house_address") return number(1, 120, rng) + " " + pick(kStreets, rng) + " road";
    if (rel.rfind("has_", 0) == 0) return "yes";
    return rel + " " + number(1, 9, rng);
  };

  std::vector<kg::TextSample> out;
  const auto& noise = hallucination_sentences();
  for (std::size_t i = 0; i < samples; ++i) {
    const std::string house = "house " + std::to_string(i);
    std::vector<kg::Triple> triples;
    std::string text;
    for (const auto& rel : features[i]) {
      triples.push_back({house, rel, value_for(rel)});
      std::string words = rel;
      std::replace(words.begin(), words.end(), '_', ' ');
      text += words + " " + triples.back().tail + " . ";
    }
    if (triples.empty()) {
      triples.push_back({house, "house_location", pick(kSuburbs, rng)});
      text += "located in " + triples.back().tail + " . ";
    }
    std::uniform_int_distribution<int> extra(0, 3);
    for (int e = extra(rng); e > 0; --e) text += pick(noise, rng) + " ";
    kg::TextSample s;
    s.id = "house-" + std::to_string(i);
    s.graph = kg::KGGraph::from_triples(std::move(triples));
    s.reference = text.substr(0, text.size() - 1);
    s.split = split;
    out.push_back(std::move(s));
  }
  return out;
}

const std::vector<std::string>& hallucination_sentences() {
  static const std::vector<std::string> kSentences = {
      "swimming pool .",          "city skyline views .",     "walking distance to cafes .",
      "freshly painted walls .",  "currently tenanted .",     "solar panels installed .",
      "double glazed windows .",  "private tennis court .",   "wine cellar downstairs .",
      "huge backyard shed .",     "sold by dowling realty .", "auction this saturday .",
      "bay views upstairs .",     "heated spa bath .",        "secure intercom entry ."};
  return kSentences;
}

std::string verbalize(const kg::KGGraph& graph) {
  std::string text;
  for (const auto& t : graph.triples()) {
    if (!text.empty()) text.push_back(' ');
    text += sentence_for(t);
  }
  return text;
}

std::vector<SteeringSample> steering_corpus(const SteeringOptions& options) {
  if (options.min_triples < 1 || options.max_triples < options.min_triples ||
      static_cast<std::size_t>(options.max_triples) > steering_relations().size()) {
    throw DataError("invalid steering triple range");
  }
  std::mt19937_64 rng(options.seed);
  const auto& relations = steering_relations();
  const auto& noise = hallucination_sentences();
  std::vector<SteeringSample> out;
  out.reserve(options.samples);
  std::uniform_int_distribution<int> triple_count(options.min_triples, options.max_triples);
  std::uniform_int_distribution<int> level_pick(0, 2);
  for (std::size_t i = 0; i < options.samples; ++i) {
    std::vector<std::size_t> rel_order(relations.size());
    std::iota(rel_order.begin(), rel_order.end(), std::size_t{0});
    std::shuffle(rel_order.begin(), rel_order.end(), rng);
    const int k = triple_count(rng);
    std::vector<kg::Triple> triples;
    for (int r = 0; r < k; ++r) {
      const auto& rel = relations[rel_order[static_cast<std::size_t>(r)]];
      triples.push_back({"house", rel.label, pick(rel.values, rng)});
    }
    SteeringSample s;
    s.sample.id = "steer-" + std::to_string(i);
    s.sample.graph = kg::KGGraph::from_triples(std::move(triples));
    s.level = static_cast<NoiseLevel>(level_pick(rng));
    if (s.level == NoiseLevel::medium) s.injected_sentences = std::uniform_int_distribution<int>(1, 2)(rng);
    if (s.level == NoiseLevel::high) s.injected_sentences = std::uniform_int_distribution<int>(3, 4)(rng);

    std::vector<std::string> sentences;
    for (const auto& t : s.sample.graph.triples()) sentences.push_back(sentence_for(t));
    std::vector<std::string> injected = noise;
    std::shuffle(injected.begin(), injected.end(), rng);
    for (int j = 0; j < s.injected_sentences; ++j) {
      std::uniform_int_distribution<std::size_t> at(0, sentences.size());
      sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(at(rng)), injected[static_cast<std::size_t>(j)]);
    }
    std::string text;
    for (const auto& sentence : sentences) {
      if (!text.empty()) text.push_back(' ');
      text += sentence;
    }
    s.sample.reference = std::move(text);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace faithgen::synth
