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

#include <string>
#include <string_view>
#include <vector>

namespace faithgen::eval {

/// Ordered facts, deduplicated under case-insensitive exact match. The first
/// spelling of a fact wins.
class FactSet {
 public:
  FactSet() = default;
  FactSet(std::initializer_list<std::string> facts);

  /// Trims surrounding whitespace; returns false for blanks and duplicates.
  bool add(std::string_view fact);
  void merge(const FactSet& other);
  bool contains(std::string_view fact) const;

  std::size_t size() const noexcept { return facts_.size(); }
  bool empty() const noexcept { return facts_.empty(); }
  const std::vector<std::string>& facts() const noexcept { return facts_; }
  auto begin() const noexcept { return facts_.begin(); }
  auto end() const noexcept { return facts_.end(); }

 private:
  std::vector<std::string> facts_;
  std::vector<std::string> keys_;
};

/// Lower-cased fact type: the text before the first ':' (or the whole fact).
std::string fact_type(std::string_view fact);

/// Removes a leading "1." / "1)" / "-" / "*" / "•" marker and whitespace.
/// Returns the input trimmed when no marker is present.
std::string strip_list_marker(std::string_view line);

/// Parses a judge's list answer. A reply of just "none" (any case, optional
/// trailing period) is the empty list. Otherwise every line that starts
/// with a list marker is one fact and other lines are ignored; a reply with
/// no marker lines throws ParseError carrying the raw text.
FactSet parse_fact_list(std::string_view response);

/// Case-insensitive "yes" prefix after stripping list markers.
bool is_affirmative(std::string_view response);

/// True when the reply opens with "yes" or "no" (after marker stripping);
/// anything else is unparseable and counted as negative.
bool is_yes_no(std::string_view response);

}  // namespace faithgen::eval
