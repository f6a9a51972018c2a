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

// faithgen-synth: writes the synthetic corpora used by the tests and the
// example configuration.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <utility>

#include "faithgen/common/error.hpp"
#include "faithgen/kg/dataset.hpp"
#include "faithgen/synth/corpus.hpp"
#include "faithgen/synth/judge_fixture.hpp"

namespace {

using namespace faithgen;

void write_split(const std::filesystem::path& path, std::vector<kg::TextSample> samples, kg::Split split) {
  for (auto& s : samples) s.split = split;
  kg::save_dataset(path, samples);
  std::cout << path.string() << ": " << samples.size() << " samples\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faithgen-synth: synthetic House-style and steering corpora"};
  app.require_subcommand(1);
  std::string out = "data";
  std::uint64_t seed = 7;
  std::size_t samples = 0;
  const std::pair<const char*, const char*> kinds[] = {
      {"house", "House-style listings split into train/valid/test"},
      {"steering", "Verbalized graphs with injected unsupported sentences at three noise levels"},
      {"judge-fixture", "Scripted judge answers for offline evaluation"},
  };
  for (const auto& [name, description] : kinds) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Generator seed")->capture_default_str();
    sub->add_option("--samples", samples, "Number of samples (0 = generator default)");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    const std::filesystem::path dir(out);
    if (kind == "house") {
      const std::size_t n = samples ? samples : 600;
      auto all = synth::house_corpus(n, seed);
      const std::size_t n_test = n / 10, n_valid = n / 10;
      std::vector<kg::TextSample> train(all.begin(), all.end() - static_cast<std::ptrdiff_t>(n_test + n_valid));
      std::vector<kg::TextSample> valid(all.end() - static_cast<std::ptrdiff_t>(n_test + n_valid),
                                        all.end() - static_cast<std::ptrdiff_t>(n_test));
      std::vector<kg::TextSample> test(all.end() - static_cast<std::ptrdiff_t>(n_test), all.end());
      write_split(dir / "train.jsonl", train, kg::Split::train);
      write_split(dir / "valid.jsonl", valid, kg::Split::valid);
      write_split(dir / "test.jsonl", test, kg::Split::test);
    } else if (kind == "steering") {
      synth::SteeringOptions o;
      o.seed = seed;
      if (samples) o.samples = samples;
      const auto corpus = synth::steering_corpus(o);
      const std::size_t held = corpus.size() / 10;
      std::vector<kg::TextSample> train, test;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        (i + held < corpus.size() ? train : test).push_back(corpus[i].sample);
      }
      write_split(dir / "train.jsonl", train, kg::Split::train);
      write_split(dir / "test.jsonl", test, kg::Split::test);
    } else {
      const auto fixture = synth::judge_fixture(samples ? samples : 50, seed);
      write_split(dir / "test.jsonl", fixture.samples, kg::Split::test);
      eval::write_judge_fixture(dir / "judge_fixture.jsonl", fixture.entries);
      std::cout << (dir / "judge_fixture.jsonl").string() << ": " << fixture.entries.size() << " entries\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
