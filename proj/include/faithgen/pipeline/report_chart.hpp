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
#include <span>
#include <string>

#include "json.hpp"

namespace faithgen::pipeline {

/// One evaluation report of one run.
struct ReportRow {
  std::string run;
  std::string ablation;
  std::string tag;
  std::string judge;
  nlohmann::json corpus;
};

/// Columns run, ablation, tag, judge, then every corpus metric in key order;
/// null metrics are left empty.
void write_comparison_csv(const std::filesystem::path& path, std::span<const ReportRow> rows);

/// Grouped bar chart of average precision, recall and hallucination.
void write_prh_chart(const std::filesystem::path& path, std::span<const ReportRow> rows);

}  // namespace faithgen::pipeline
