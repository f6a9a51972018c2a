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

#include "faithgen/eval/facts.hpp"

#include <algorithm>
#include <cctype>

#include "faithgen/common/error.hpp"

namespace faithgen::eval {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Length of a leading list marker (without the following space), or 0.
std::size_t marker_length(std::string_view s) {
  if (s.starts_with("\xE2\x80\xA2")) return 3;  // bullet
  if (s.starts_with("-") || s.starts_with("*")) return 1;
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) return i + 1;
  return 0;
}

}  // namespace

FactSet::FactSet(std::initializer_list<std::string> facts) {
  for (const auto& f : facts) add(f);
}

bool FactSet::add(std::string_view fact) {
  const auto t = trim(fact);
  if (t.empty()) return false;
  std::string key = lower(t);
  if (std::find(keys_.begin(), keys_.end(), key) != keys_.end()) return false;
  keys_.push_back(std::move(key));
  facts_.emplace_back(t);
  return true;
}

void FactSet::merge(const FactSet& other) {
  for (const auto& f : other) add(f);
}

bool FactSet::contains(std::string_view fact) const {
  const std::string key = lower(trim(fact));
  return std::find(keys_.begin(), keys_.end(), key) != keys_.end();
}

std::string fact_type(std::string_view fact) {
  const auto colon = fact.find(':');
  return lower(trim(colon == std::string_view::npos ? fact : fact.substr(0, colon)));
}

std::string strip_list_marker(std::string_view line) {
  const auto t = trim(line);
  const auto n = marker_length(t);
  return std::string(trim(t.substr(n)));
}

FactSet parse_fact_list(std::string_view response) {
  const auto whole = lower(trim(response));
  if (whole == "none" || whole == "none.") return {};
  FactSet facts;
  bool any_marker = false;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    auto end = response.find('\n', pos);
    if (end == std::string_view::npos) end = response.size();
    const auto line = trim(response.substr(pos, end - pos));
    pos = end + 1;
    const auto n = marker_length(line);
    if (n == 0 || (n < line.size() && line[n] != ' ' && line[n] != '\t')) continue;
    any_marker = true;
    facts.add(line.substr(n));
  }
  if (!any_marker) throw ParseError("judge reply is not a list: \"" + std::string(response) + "\"", 0);
  return facts;
}

bool is_affirmative(std::string_view response) {
  return lower(strip_list_marker(response)).starts_with("yes");
}

bool is_yes_no(std::string_view response) {
  const auto s = lower(strip_list_marker(response));
  return s.starts_with("yes") || s.starts_with("no");
}

}  // namespace faithgen::eval
