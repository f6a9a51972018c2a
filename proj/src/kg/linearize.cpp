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

#include "faithgen/kg/linearize.hpp"

#include <spdlog/spdlog.h>

#include "faithgen/common/error.hpp"
#include "faithgen/kg/tokenize.hpp"

namespace faithgen::kg {

namespace {

std::string render(const Triple& t) {
  std::string out;
  out.reserve(t.head.size() + t.relation.size() + t.tail.size() + 12);
  out.append(kHeadMarker).append(" ").append(t.head);
  out.append(" ").append(kRelationMarker).append(" ").append(t.relation);
  out.append(" ").append(kTailMarker).append(" ").append(t.tail);
  return out;
}

}  // namespace

std::size_t source_token_count(std::string_view text) { return split_source(text).size(); }

LinearizedGraph linearize(const KGGraph& graph, std::size_t max_tokens) {
  if (graph.empty()) throw DataError("cannot linearize a graph with no triples");
  LinearizedGraph out;
  for (const Triple& t : graph.triples()) {
    const std::string piece = render(t);
    const std::size_t piece_tokens = source_token_count(piece);
    if (out.token_count + piece_tokens > max_tokens) {
      if (out.triple_count == 0) {
        throw DataError("first triple alone exceeds the " + std::to_string(max_tokens) + "-token budget");
      }
      spdlog::warn("linearized graph truncated to {} of {} triples ({}-token budget)", out.triple_count,
                   graph.size(), max_tokens);
      break;
    }
    if (!out.text.empty()) out.text.push_back(' ');
    out.text += piece;
    out.token_count += piece_tokens;
    ++out.triple_count;
  }
  return out;
}

KGGraph parse_linearized(std::string_view text) {
  if (text.empty()) throw ParseError("empty linearization", 0);

  // Markers separate fields as " <R> " etc.; the first triple starts with "<H> ".
  const std::string head_open = std::string(kHeadMarker) + " ";
  const std::string next_head = " " + std::string(kHeadMarker) + " ";
  const std::string rel_sep = " " + std::string(kRelationMarker) + " ";
  const std::string tail_sep = " " + std::string(kTailMarker) + " ";

  if (text.substr(0, head_open.size()) != head_open) {
    throw ParseError("expected '<H> ' at start of linearization", 0);
  }

  std::vector<Triple> triples;
  std::size_t pos = head_open.size();
  auto field_until = [&](std::string_view sep, bool allow_end, std::size_t& cursor) {
    std::size_t end = text.find(sep, cursor);
    if (end == std::string_view::npos) {
      if (!allow_end) throw ParseError("dangling marker: expected '" + std::string(sep.substr(1, 3)) + "'", cursor);
      end = text.size();
    }
    std::string field(text.substr(cursor, end - cursor));
    if (auto problem = field_problem(field)) throw ParseError(*problem, cursor);
    cursor = end == text.size() ? end : end + sep.size();
    return std::make_pair(std::move(field), end);
  };

  while (true) {
    auto [head, head_end] = field_until(rel_sep, false, pos);
    auto [relation, rel_end] = field_until(tail_sep, false, pos);
    auto [tail, tail_end] = field_until(next_head, true, pos);
    triples.push_back({std::move(head), std::move(relation), std::move(tail)});
    if (tail_end == text.size()) break;
  }
  try {
    return KGGraph::from_triples(std::move(triples));
  } catch (const DataError& e) {
    throw ParseError(e.what(), 0);
  }
}

}  // namespace faithgen::kg
