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

#include <array>
#include <string>
#include <string_view>

#include "faithgen/kg/graph.hpp"
#include "faithgen/kg/linearize.hpp"
#include "faithgen/kg/tokenize.hpp"

namespace faithgen::control {

/// Hallucination level of a reference; the control feature token.
enum class HallucinationTag { low, medium, high };

inline constexpr std::array<HallucinationTag, 3> kAllTags = {HallucinationTag::low, HallucinationTag::medium,
                                                             HallucinationTag::high};

/// "hal_low" / "hal_medium" / "hal_high".
std::string_view tag_name(HallucinationTag tag);
/// "<hal_low>" / "<hal_medium>" / "<hal_high>".
std::string_view tag_token(HallucinationTag tag);
kg::TokenId tag_token_id(HallucinationTag tag);

/// Accepts the name ("hal_low") or the token form ("<hal_low>").
HallucinationTag tag_from_string(std::string_view text);

/// "{tag token} {linearized text}".
std::string apply_control_token(const kg::LinearizedGraph& linearized, HallucinationTag tag);

struct TaggedSource {
  HallucinationTag tag;
  kg::KGGraph graph;
};

/// Inverse of apply_control_token. Throws ParseError if the first word is not
/// a tag token or the remainder is not a valid linearization.
TaggedSource parse_tagged_source(std::string_view text);

}  // namespace faithgen::control
