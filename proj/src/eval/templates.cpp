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

#include "faithgen/eval/templates.hpp"

#include <fstream>
#include <sstream>

#include "faithgen/common/error.hpp"

namespace faithgen::eval {

TemplateSet TemplateSet::builtin() {
  TemplateSet set;
  set.texts_ = builtin_template_texts();
  return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
  TemplateSet set;
  for (const auto& [id, text] : builtin_template_texts()) {
    const auto name = id.substr(id.find('/') + 1);
    std::ifstream in(dir / (name + ".txt"));
    if (!in) throw ConfigError("missing prompt template " + (dir / (name + ".txt")).string());
    std::ostringstream ss;
    ss << in.rdbuf();
    set.texts_[id] = ss.str();
  }
  return set;
}

const std::string& TemplateSet::text(const std::string& id) const {
  const auto it = texts_.find(id);
  if (it == texts_.end()) throw ConfigError("unknown prompt template '" + id + "'");
  return it->second;
}

std::string TemplateSet::render(const std::string& id, const std::string& input, const std::string& output,
                                const std::string& fact) const {
  const std::string& tpl = text(id);
  std::string out;
  out.reserve(tpl.size() + input.size() + output.size() + fact.size());
  for (std::size_t i = 0; i < tpl.size();) {
    if (tpl.compare(i, 7, "{input}") == 0) {
      out += input;
      i += 7;
    } else if (tpl.compare(i, 8, "{output}") == 0) {
      out += output;
      i += 8;
    } else if (tpl.compare(i, 6, "{fact}") == 0) {
      out += fact;
      i += 6;
    } else {
      out.push_back(tpl[i++]);
    }
  }
  return out;
}

}  // namespace faithgen::eval
