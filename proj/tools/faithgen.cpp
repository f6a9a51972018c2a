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

// faithgen: command-line entry point for the hallucination-controlled
// KG-to-text pipeline.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>
#include <optional>

#include "faithgen/common/error.hpp"
#include "faithgen/pipeline/config.hpp"
#include "faithgen/pipeline/stages.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kData = 3, kUpstream = 4 };

using namespace faithgen;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string ablation;
  std::string tag;
  std::string judge;
  bool resume = false;
  bool force = false;
  bool quiet = false;
  std::vector<std::string> runs;
};

pipeline::RunConfig load_config(const Flags& flags) {
  if (flags.config.empty()) throw ConfigError("--config is required");
  auto config = pipeline::RunConfig::load(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.output_dir = flags.out;
  config.validate();
  return config;
}

pipeline::StageOptions stage_options(const Flags& flags) {
  pipeline::StageOptions o;
  try {
    if (!flags.ablation.empty()) o.ablation = model::ablation_from_string(flags.ablation);
    if (!flags.tag.empty()) o.tag = control::tag_from_string(flags.tag);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!flags.judge.empty()) o.judge = flags.judge;
  o.resume = flags.resume;
  o.force = flags.force;
  return o;
}

void print(const pipeline::StageResult& r) {
  std::cout << r.stage << (r.skipped ? ": up to date" : ": done") << '\n';
  for (const auto& p : r.outputs) std::cout << "  " << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faithgen: faithful KG-to-text generation with contrastive learning and hallucination control"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Run configuration (JSON)");
    sub->add_option("--seed", flags.seed, "Override the run seed");
    sub->add_option("--out", flags.out, "Override the run directory");
    sub->add_flag("--force", flags.force, "Rerun even if the stage is up to date");
    sub->add_flag("-q,--quiet", flags.quiet, "Only log warnings and errors");
  };
  auto* prepare = app.add_subcommand("prepare", "Validate datasets, build the vocabulary, write statistics");
  auto* contrast = app.add_subcommand("contrast", "Build positive and negative sets for contrastive learning");
  auto* bucket = app.add_subcommand("bucket", "Score training references and assign hallucination tags");
  auto* train = app.add_subcommand("train", "Train one ablation of the model");
  auto* generate = app.add_subcommand("generate", "Decode the evaluation split");
  auto* evaluate = app.add_subcommand("evaluate", "Judge-based P/R/H, salient metrics, BLEU and ROUGE-L");
  auto* report = app.add_subcommand("report", "Merge evaluation reports of one or more runs");
  for (auto* sub : {prepare, contrast, bucket, train, generate, evaluate, report}) common(sub);
  const std::vector<std::string> ablations = {"full", "control-only", "contrastive-only", "ce-only"};
  for (auto* sub : {train, generate, evaluate}) {
    sub->add_option("--ablation", flags.ablation, "full | control-only | contrastive-only | ce-only")
        ->check(CLI::IsMember(ablations));
  }
  train->add_flag("--resume", flags.resume, "Continue from the last epoch checkpoint");
  for (auto* sub : {generate, evaluate}) {
    sub->add_option("--tag", flags.tag, "Control tag: hal_low (default), hal_medium or hal_high");
  }
  evaluate->add_option("--judge", flags.judge, "mock | remote")->check(CLI::IsMember({"mock", "remote"}));
  report->add_option("runs", flags.runs, "Run directories (default: the configured run)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  spdlog::set_level(flags.quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    const auto options = stage_options(flags);
    if (report->parsed()) {
      std::vector<std::filesystem::path> runs(flags.runs.begin(), flags.runs.end());
      std::filesystem::path out = flags.out;
      if (runs.empty() || out.empty()) {
        const auto config = load_config(flags);
        if (runs.empty()) runs.push_back(config.output_dir);
        if (out.empty()) out = config.output_dir / "report";
      }
      print(pipeline::run_report(runs, out));
      return kOk;
    }
    const auto config = load_config(flags);
    if (prepare->parsed()) print(pipeline::run_prepare(config, options));
    if (contrast->parsed()) print(pipeline::run_contrast(config, options));
    if (bucket->parsed()) print(pipeline::run_bucket(config, options));
    if (train->parsed()) print(pipeline::run_train(config, options));
    if (generate->parsed()) print(pipeline::run_generate(config, options));
    if (evaluate->parsed()) print(pipeline::run_evaluate(config, options));
    return kOk;
  } catch (const ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kConfig;
  } catch (const UpstreamMissingError& e) {
    spdlog::error("{}", e.what());
    return kUpstream;
  } catch (const DataError& e) {
    spdlog::error("data error: {}", e.what());
    return kData;
  } catch (const ParseError& e) {
    spdlog::error("data error: {}", e.what());
    return kData;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFailure;
  }
}
