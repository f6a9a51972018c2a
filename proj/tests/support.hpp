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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "faithgen/kg/graph.hpp"
#include "faithgen/model/config.hpp"

namespace faithgen::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& stem = "faithgen-test") {
    static std::atomic<int> counter{0};
    const auto tick = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            (stem + "-" + std::to_string(tick) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string random_word(std::mt19937_64& rng, int min_len = 1, int max_len = 8) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789_-";
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) w += alphabet[pick(rng)];
  return w;
}

/// A field of one to three words.
inline std::string random_field(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> words(1, 3);
  std::string f = random_word(rng);
  for (int i = 1, n = words(rng); i < n; ++i) f += " " + random_word(rng);
  return f;
}

/// A graph of 1..max_triples distinct random triples.
inline kg::KGGraph random_graph(std::mt19937_64& rng, int max_triples = 10) {
  std::uniform_int_distribution<int> count(1, max_triples);
  std::vector<kg::Triple> triples;
  const int n = count(rng);
  while (static_cast<int>(triples.size()) < n) {
    kg::Triple t{random_field(rng), random_field(rng), random_field(rng)};
    bool dup = false;
    for (const auto& u : triples) dup = dup || u == t;
    if (!dup) triples.push_back(std::move(t));
  }
  return kg::KGGraph::from_triples(std::move(triples));
}

/// A small model for fast tests; vocab_size must be set by the caller.
inline model::ModelConfig tiny_model_config(int vocab_size, std::uint64_t seed = 1) {
  model::ModelConfig c;
  c.vocab_size = vocab_size;
  c.embedding_dim = 16;
  c.hidden_dim = 16;
  c.ffn_dim = 32;
  c.layers = 1;
  c.heads = 2;
  c.dropout = 0.0;
  c.max_source_length = 64;
  c.max_target_length = 24;
  c.learning_rate = 1e-2;
  c.batch_size = 4;
  c.seed = seed;
  return c;
}

}  // namespace faithgen::testing
