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
#include <map>
#include <string>

namespace faithgen::eval {

/// Template ids sent with every judge prompt.
inline constexpr const char* kTemplateInputFacts = "v1/template-1";
inline constexpr const char* kTemplateCommonFact = "v1/template-2";
inline constexpr const char* kTemplateExtrinsic = "v1/template-3a";
inline constexpr const char* kTemplateIntrinsic = "v1/template-3b";
inline constexpr const char* kTemplateFluency = "v1/fluency";

/// Template texts compiled into the binary, keyed by id.
const std::map<std::string, std::string>& builtin_template_texts();

/// Prompt texts with {input}, {output} and {fact} placeholders.
class TemplateSet {
 public:
  static TemplateSet builtin();
  /// Reads <dir>/<name>.txt for every built-in id, where name drops the
/// version prefix (v1/fluency -> fluency.txt); missing files throw ConfigError.
  static TemplateSet load(const std::filesystem::path& dir);

  const std::string& text(const std::string& id) const;
  std::string render(const std::string& id, const std::string& input, const std::string& output,
                     const std::string& fact) const;

 private:
  std::map<std::string, std::string> texts_;
};

}  // namespace faithgen::eval
