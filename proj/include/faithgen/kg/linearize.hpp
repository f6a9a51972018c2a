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
#include <string>
#include <string_view>

#include "faithgen/kg/graph.hpp"

namespace faithgen::kg {

inline constexpr std::size_t kDefaultMaxSourceTokens = 600;

struct LinearizedGraph {
  std::string text;
  std::size_t token_count = 0;
  /// Triples kept; less than the graph size when the budget forced truncation.
  std::size_t triple_count = 0;
};

/// "<H> head <R> relation <T> tail" per triple, joined by single spaces, in
/// triple order. Truncates at a triple boundary (with a warning) if the token
/// count would exceed `max_tokens`. Throws DataError for an empty graph, or
/// if not even the first triple fits.
LinearizedGraph linearize(const KGGraph& graph,
                          std::size_t max_tokens = kDefaultMaxSourceTokens);

/// Exact inverse of linearize. Throws ParseError with a character offset.
KGGraph parse_linearized(std::string_view text);

/// Number of source tokens a linearized string occupies.
std::size_t source_token_count(std::string_view text);

}  // namespace faithgen::kg
