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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace faithgen::kg {

using TokenId = std::int32_t;

inline constexpr std::string_view kHeadMarker = "<H>";
inline constexpr std::string_view kRelationMarker = "<R>";
inline constexpr std::string_view kTailMarker = "<T>";

/// Splits corpus text into normalized word strings: lowercased, split on
/// whitespace, with every punctuation character as its own token. Word
/// characters are ASCII alphanumerics, '_', '-', '\'' and any non-ASCII byte.
/// Reserved tokens can never be produced because '<' and '>' are punctuation.
std::vector<std::string> split_text(std::string_view text);

/// Like split_text, except that whitespace-delimited words exactly equal to a
/// reserved marker or hallucination tag are kept whole. Used for model sources.
std::vector<std::string> split_source(std::string_view text);

/// split_text joined by single spaces.
std::string normalize_text(std::string_view text);

/// True if the token contains no word character (pure punctuation).
bool is_punctuation(std::string_view token);

/// Token <-> id bijection with a fixed block of reserved ids.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kBos = 1;
  static constexpr TokenId kEos = 2;
  static constexpr TokenId kUnk = 3;
  static constexpr TokenId kHead = 4;
  static constexpr TokenId kRelation = 5;
  static constexpr TokenId kTail = 6;
  static constexpr TokenId kHalLow = 7;
  static constexpr TokenId kHalMedium = 8;
  static constexpr TokenId kHalHigh = 9;
  static constexpr TokenId kNumReserved = 10;

  static const std::vector<std::string>& reserved_tokens();

  Vocabulary();

  /// Returns the id of `token`, inserting it if new.
  TokenId add(std::string_view token);

  /// Id of `token`, or kUnk.
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  std::size_t size() const noexcept { return id_to_token_.size(); }

  static bool is_reserved(TokenId id) noexcept { return id >= 0 && id < kNumReserved; }

  nlohmann::json to_json() const;
  /// Validates bijection, contiguous ids and the reserved block.
  static Vocabulary from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  /// SHA-256 of the canonical JSON form; recorded in checkpoints.
  std::string hash() const;

 private:
  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;
};

/// Corpus text to ids (split_text rule); OOV maps to UNK.
std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab);

/// Model source (optional tag + linearized graph) to ids (split_source rule).
std::vector<TokenId> tokenize_source(std::string_view text, const Vocabulary& vocab);

/// Space-joined token strings; PAD, BOS and EOS are dropped.
std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab);

}  // namespace faithgen::kg
