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

#include "faithgen/pipeline/report_chart.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "faithgen/common/error.hpp"

namespace faithgen::pipeline {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_comparison_csv(const std::filesystem::path& path, std::span<const ReportRow> rows) {
  auto out = open_output(path);
  std::vector<std::string> metrics;
  if (!rows.empty()) {
    for (const auto& [k, v] : rows.front().corpus.items()) metrics.push_back(k);
  }
  out << "run,ablation,tag,judge";
  for (const auto& m : metrics) out << ',' << m;
  out << '\n';
  out.precision(17);
  for (const auto& r : rows) {
    out << csv_field(r.run) << ',' << r.ablation << ',' << r.tag << ',' << csv_field(r.judge);
    for (const auto& m : metrics) {
      out << ',';
      const auto& v = r.corpus.at(m);
      if (v.is_number_integer()) {
        out << v.get<std::int64_t>();
      } else if (v.is_number()) {
        out << v.get<double>();
      }
    }
    out << '\n';
  }
}

void write_prh_chart(const std::filesystem::path& path, std::span<const ReportRow> rows) {
  constexpr std::array<const char*, 3> kKeys = {"avg_precision", "avg_recall", "avg_hallucination"};
  constexpr std::array<const char*, 3> kLabels = {"P", "R", "H"};
  constexpr std::array<const char*, 3> kColors = {"#4c72b0", "#55a868", "#c44e52"};
  constexpr int kBar = 22, kGap = 28, kHeight = 200, kTop = 30, kLeft = 50;
  const int group = 3 * kBar + kGap;
  const int width = kLeft + static_cast<int>(rows.size()) * group + 120;
  const int height = kTop + kHeight + 70;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
      << "Judge-based precision, recall and hallucination</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + kHeight << "\" x2=\"" << width - 110 << "\" y2=\""
      << kTop + kHeight << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const int y = kTop + kHeight - t * kHeight / 4;
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" font-family=\"sans-serif\" font-size=\"10\" "
        << "text-anchor=\"end\">" << t * 25 << "%</text>\n";
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int x0 = kLeft + 10 + static_cast<int>(i) * group;
    for (std::size_t k = 0; k < kKeys.size(); ++k) {
      const auto& v = rows[i].corpus.at(kKeys[k]);
      const double value = v.is_number() ? v.get<double>() : 0.0;
      const int h = static_cast<int>(value * kHeight + 0.5);
      svg << "<rect x=\"" << x0 + static_cast<int>(k) * kBar << "\" y=\"" << kTop + kHeight - h << "\" width=\""
          << kBar - 2 << "\" height=\"" << h << "\" fill=\"" << kColors[k] << "\"/>\n";
    }
    svg << "<text x=\"" << x0 + (3 * kBar) / 2 << "\" y=\"" << kTop + kHeight + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
        << xml_escape(rows[i].run + " " + rows[i].ablation) << "</text>\n";
    svg << "<text x=\"" << x0 + (3 * kBar) / 2 << "\" y=\"" << kTop + kHeight + 30
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << xml_escape(rows[i].tag)
        << "</text>\n";
  }
  for (std::size_t k = 0; k < kKeys.size(); ++k) {
    const int y = kTop + 10 + static_cast<int>(k) * 18;
    svg << "<rect x=\"" << width - 100 << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\"" << kColors[k]
        << "\"/>\n";
    svg << "<text x=\"" << width - 82 << "\" y=\"" << y + 10 << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << kLabels[k] << "</text>\n";
  }
  svg << "</svg>\n";
  auto out = open_output(path);
  out << svg.str();
}

}  // namespace faithgen::pipeline
