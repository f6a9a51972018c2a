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

#include "faithgen/kg/tokenize.hpp"

#include <algorithm>
#include <fstream>

#include "faithgen/common/error.hpp"
#include "faithgen/common/hash.hpp"
#include "faithgen/common/jsonl.hpp"

namespace faithgen::kg {

namespace {

bool is_space(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }

bool is_word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-' || c == '\'' || c >= 0x80;
}

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

void split_word(std::string_view word, std::vector<std::string>& out) {
  std::string current;
  for (unsigned char c : word) {
    if (is_word_char(c)) {
      current.push_back(lower(c));
    } else {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
      out.emplace_back(1, static_cast<char>(c));
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
}

template <typename OnWord>
void for_each_word(std::string_view text, OnWord&& on_word) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !is_space(static_cast<unsigned char>(text[end]))) ++end;
    if (end > pos) on_word(text.substr(pos, end - pos));
    pos = end;
  }
}

}  // namespace

std::vector<std::string> split_text(std::string_view text) {
  std::vector<std::string> out;
  for_each_word(text, [&](std::string_view word) { split_word(word, out); });
  return out;
}

std::vector<std::string> split_source(std::string_view text) {
  const auto& reserved = Vocabulary::reserved_tokens();
  std::vector<std::string> out;
  for_each_word(text, [&](std::string_view word) {
    if (std::find(reserved.begin() + Vocabulary::kHead, reserved.end(), word) != reserved.end()) {
      out.emplace_back(word);
    } else {
      split_word(word, out);
    }
  });
  return out;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  for (const std::string& tok : split_text(text)) {
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

bool is_punctuation(std::string_view token) {
  return std::none_of(token.begin(), token.end(),
                      [](char c) { return is_word_char(static_cast<unsigned char>(c)); });
}

const std::vector<std::string>& Vocabulary::reserved_tokens() {
  static const std::vector<std::string> kReserved = {
      "<pad>", "<s>", "</s>", "<unk>", "<H>", "<R>", "<T>", "<hal_low>", "<hal_medium>", "<hal_high>"};
  return kReserved;
}

Vocabulary::Vocabulary() {
  for (const std::string& tok : reserved_tokens()) add(tok);
}

TokenId Vocabulary::add(std::string_view token) {
  const std::string key(token);
  if (auto it = token_to_id_.find(key); it != token_to_id_.end()) return it->second;
  const auto id = static_cast<TokenId>(id_to_token_.size());
  token_to_id_.emplace(key, id);
  id_to_token_.push_back(key);
  return id;
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.contains(std::string(token));
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw Error("token id " + std::to_string(id) + " out of range");
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

nlohmann::json Vocabulary::to_json() const {
  nlohmann::ordered_json ordered;
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) ordered[id_to_token_[i]] = i;
  return nlohmann::json::parse(ordered.dump());
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("vocabulary must be a JSON object");
  std::vector<std::string> by_id(j.size());
  std::vector<bool> filled(j.size(), false);
  for (const auto& [token, value] : j.items()) {
    if (!value.is_number_integer()) throw DataError("vocabulary id for '" + token + "' is not an integer");
    const auto id = value.get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= by_id.size() || filled[static_cast<std::size_t>(id)]) {
      throw DataError("vocabulary ids are not a bijection onto 0.." + std::to_string(j.size() - 1));
    }
    by_id[static_cast<std::size_t>(id)] = token;
    filled[static_cast<std::size_t>(id)] = true;
  }
  const auto& reserved = reserved_tokens();
  for (std::size_t i = 0; i < reserved.size(); ++i) {
    if (i >= by_id.size() || by_id[i] != reserved[i]) {
      throw DataError("vocabulary reserved id " + std::to_string(i) + " must be '" + reserved[i] + "'");
    }
  }
  Vocabulary vocab;
  for (std::size_t i = reserved.size(); i < by_id.size(); ++i) vocab.add(by_id[i]);
  return vocab;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json ordered;
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) ordered[id_to_token_[i]] = i;
  write_text(path, ordered.dump(1) + "\n");
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) { return from_json(read_json(path)); }

std::string Vocabulary::hash() const {
  std::string canonical;
  for (const std::string& tok : id_to_token_) {
    canonical += tok;
    canonical.push_back('\n');
  }
  return sha256_hex(canonical);
}

std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  for (const std::string& tok : split_text(text)) ids.push_back(vocab.id(tok));
  return ids;
}

std::vector<TokenId> tokenize_source(std::string_view text, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  for (const std::string& tok : split_source(text)) ids.push_back(vocab.id(tok));
  return ids;
}

std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::string out;
  for (TokenId id : ids) {
    if (id == Vocabulary::kPad || id == Vocabulary::kBos || id == Vocabulary::kEos) continue;
    if (!out.empty()) out.push_back(' ');
    out += vocab.token(id);
  }
  return out;
}

}  // namespace faithgen::kg
