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

#include "faithgen/control/tags.hpp"

#include "faithgen/common/error.hpp"

namespace faithgen::control {

std::string_view tag_name(HallucinationTag tag) {
  switch (tag) {
    case HallucinationTag::low: return "hal_low";
    case HallucinationTag::medium: return "hal_medium";
    case HallucinationTag::high: return "hal_high";
  }
  return "hal_low";
}

std::string_view tag_token(HallucinationTag tag) {
  switch (tag) {
    case HallucinationTag::low: return "<hal_low>";
    case HallucinationTag::medium: return "<hal_medium>";
    case HallucinationTag::high: return "<hal_high>";
  }
  return "<hal_low>";
}

kg::TokenId tag_token_id(HallucinationTag tag) {
  switch (tag) {
    case HallucinationTag::low: return kg::Vocabulary::kHalLow;
    case HallucinationTag::medium: return kg::Vocabulary::kHalMedium;
    case HallucinationTag::high: return kg::Vocabulary::kHalHigh;
  }
  return kg::Vocabulary::kHalLow;
}

HallucinationTag tag_from_string(std::string_view text) {
  for (HallucinationTag tag : kAllTags) {
    if (text == tag_name(tag) || text == tag_token(tag)) return tag;
  }
  throw ConfigError("unknown hallucination tag '" + std::string(text) + "'");
}

std::string apply_control_token(const kg::LinearizedGraph& linearized, HallucinationTag tag) {
  std::string out(tag_token(tag));
  out.push_back(' ');
  out += linearized.text;
  return out;
}

TaggedSource parse_tagged_source(std::string_view text) {
  const auto space = text.find(' ');
  if (space == std::string_view::npos) throw ParseError("expected '<tag> <linearized graph>'", 0);
  const std::string_view first = text.substr(0, space);
  for (HallucinationTag tag : kAllTags) {
    if (first == tag_token(tag)) {
      try {
        return {tag, kg::parse_linearized(text.substr(space + 1))};
      } catch (const ParseError& e) {
        throw ParseError(e.what(), e.offset() + space + 1);
      }
    }
  }
  throw ParseError("source does not start with a hallucination tag", 0);
}

}  // namespace faithgen::control
