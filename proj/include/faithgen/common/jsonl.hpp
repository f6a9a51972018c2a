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

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace faithgen {

using json = nlohmann::json;

/// Calls `fn(object, line_number)` for every non-blank line of a JSONL file.
/// Unparseable JSON raises DataError naming file:line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, std::size_t)>& fn);

std::vector<json> read_jsonl(const std::filesystem::path& path);

void write_jsonl(const std::filesystem::path& path, std::span<const json> rows);

json read_json(const std::filesystem::path& path);

/// Writes pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const json& value);

std::string read_text(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace faithgen
