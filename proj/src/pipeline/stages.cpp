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

#include "faithgen/pipeline/stages.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include <spdlog/spdlog.h>

#include "faithgen/common/error.hpp"
#include "faithgen/common/hash.hpp"
#include "faithgen/common/jsonl.hpp"
#include "faithgen/contrast/paraphrase.hpp"
#include "faithgen/contrast/sampling.hpp"
#include "faithgen/control/buckets.hpp"
#include "faithgen/control/scorer.hpp"
#include "faithgen/eval/fact_eval.hpp"
#include "faithgen/eval/report.hpp"
#include "faithgen/eval/text_metrics.hpp"
#include "faithgen/kg/dataset.hpp"
#include "faithgen/kg/linearize.hpp"
#include "faithgen/model/checkpoint.hpp"
#include "faithgen/model/decode.hpp"
#include "faithgen/pipeline/manifest.hpp"
#include "faithgen/pipeline/report_chart.hpp"
#include "faithgen/pipeline/training_data.hpp"

namespace faithgen::pipeline {

namespace fs = std::filesystem;
using control::HallucinationTag;
using model::Ablation;

namespace {

constexpr std::uint64_t kContrastSalt = 1;
constexpr std::uint64_t kShuffleSalt = 2;
constexpr std::size_t kUnboundedSource = std::size_t{1} << 30;

// Shared bookkeeping of one stage invocation.
class StageRun {
 public:
  StageRun(const RunConfig& config, std::string stage) : config_(config), manifest_(Manifest::load(config.output_dir)) {
    record_.stage = std::move(stage);
    record_.config_hash = config.hash();
    record_.started = utc_timestamp();
    fs::create_directories(config.output_dir);
    write_json(config.output_dir / "config.json", config.to_json());
    manifest_.config_hash = record_.config_hash;
  }

  Manifest& manifest() { return manifest_; }
  const fs::path& dir() const { return config_.output_dir; }

  const StageRecord& require(const std::string& stage, const std::string& command) {
    const StageRecord& r = manifest_.require(stage, command);
    upstream_keys_.push_back(r.key);
    for (const auto& out : r.outputs) record_.inputs.push_back(out);
    return r;
  }

  void add_input(const fs::path& path) { record_.inputs.push_back(manifest_.artifact(path)); }

  /// Fixes the stage key from its configuration; returns true when the
  /// stage is already up to date.
  bool keyed(const json& stage_config, bool force) {
    json basis = {{"stage", record_.stage}, {"config", stage_config}, {"upstream", upstream_keys_}};
    json inputs = json::array();
    for (const auto& in : record_.inputs) inputs.push_back(in.sha256);
    basis["inputs"] = inputs;
    record_.key = sha256_hex(basis.dump());
    if (!force && manifest_.up_to_date(record_.stage, record_.key)) {
      spdlog::info("{} is up to date; nothing to do", record_.stage);
      return true;
    }
    return false;
  }

  const std::string& key() const { return record_.key; }

  StageResult skipped() const {
    StageResult r;
    r.stage = record_.stage;
    r.skipped = true;
    for (const auto& out : manifest_.find(record_.stage)->outputs) r.outputs.push_back(manifest_.resolve(out.path));
    r.summary = manifest_.find(record_.stage)->details;
    return r;
  }

  StageResult finish(const std::vector<fs::path>& outputs, json details) {
    for (const auto& p : outputs) record_.outputs.push_back(manifest_.artifact(p));
    record_.finished = utc_timestamp();
    record_.details = details;
    manifest_.put(record_);
    manifest_.save();
    StageResult r;
    r.stage = record_.stage;
    r.outputs = outputs;
    r.summary = std::move(details);
    return r;
  }

 private:
  const RunConfig& config_;
  Manifest manifest_;
  StageRecord record_;
  std::vector<std::string> upstream_keys_;
};

std::vector<kg::TextSample> load_split(const RunConfig& config, kg::Split split) {
  const fs::path& path = split == kg::Split::train ? config.data.train
                         : split == kg::Split::valid ? config.data.valid
                                                     : config.data.test;
  if (path.empty()) throw ConfigError("no dataset path configured for the " + std::string(kg::to_string(split)) + " split");
  if (!fs::exists(path)) throw DataError("dataset file " + path.string() + " does not exist");
  return kg::load_dataset(path, split);
}

std::size_t source_budget(const RunConfig& config) { return static_cast<std::size_t>(config.model.max_source_length); }

Ablation ablation_of(const RunConfig& config, const StageOptions& options) {
  return options.ablation.value_or(config.training.ablation);
}

std::optional<HallucinationTag> tag_of(Ablation ablation, const StageOptions& options) {
  if (!model::uses_control_token(ablation)) {
    if (options.tag) throw ConfigError("ablation " + model::to_string(ablation) + " does not use control tokens");
    return std::nullopt;
  }
  return options.tag.value_or(HallucinationTag::low);
}

std::string tag_dir(std::optional<HallucinationTag> tag) {
  return tag ? std::string(control::tag_name(*tag)) : std::string("untagged");
}

std::string judge_of(const RunConfig& config, const StageOptions& options) {
  const std::string judge = options.judge.value_or(config.judge.kind);
  if (judge != "mock" && judge != "remote") throw ConfigError("judge must be 'mock' or 'remote'");
  return judge;
}

}  // namespace

std::string train_stage_id(Ablation ablation) { return "train/" + model::to_string(ablation); }

std::string generate_stage_id(Ablation ablation, std::optional<HallucinationTag> tag) {
  return "generate/" + model::to_string(ablation) + "/" + tag_dir(tag);
}

std::string evaluate_stage_id(Ablation ablation, std::optional<HallucinationTag> tag, const std::string& judge) {
  return "evaluate/" + model::to_string(ablation) + "/" + tag_dir(tag) + "/" + judge;
}

StageResult run_prepare(const RunConfig& config, const StageOptions& options) {
  StageRun run(config, "prepare");
  run.add_input(config.data.train);
  if (!config.data.valid.empty()) run.add_input(config.data.valid);
  if (!config.data.test.empty()) run.add_input(config.data.test);
  if (run.keyed({{"max_source_length", config.model.max_source_length}}, options.force)) return run.skipped();

  const auto train = load_split(config, kg::Split::train);
  if (train.empty()) throw DataError("training split " + config.data.train.string() + " is empty");
  json splits = {{"train", kg::compute_stats(train).to_json()}};
  kg::Vocabulary vocab = kg::build_vocabulary(train);
  std::set<std::string> relations;
  for (const auto& s : train) {
    for (const auto& t : s.graph.triples()) relations.insert(t.relation);
  }
  for (const auto split : {kg::Split::valid, kg::Split::test}) {
    const fs::path& path = split == kg::Split::valid ? config.data.valid : config.data.test;
    if (path.empty()) continue;
    const auto samples = load_split(config, split);
    splits[std::string(kg::to_string(split))] = kg::compute_stats(samples).to_json();
    for (const auto& s : samples) {
      for (const auto& tok : kg::split_source(kg::linearize(s.graph, kUnboundedSource).text)) vocab.add(tok);
      for (const auto& t : s.graph.triples()) relations.insert(t.relation);
    }
  }
  const json stats = {{"splits", splits},
                      {"relation_count", relations.size()},
                      {"relations", std::vector<std::string>(relations.begin(), relations.end())},
                      {"vocabulary_size", vocab.size()}};
  const fs::path out = run.dir() / "prepare";
  vocab.save(out / "vocab.json");
  write_json(out / "stats.json", stats);
  spdlog::info("prepared {} training samples, {} relations, vocabulary of {}", train.size(), relations.size(),
               vocab.size());
  return run.finish({out / "vocab.json", out / "stats.json"},
                    {{"train_samples", train.size()}, {"relations", relations.size()}, {"vocabulary", vocab.size()}});
}

StageResult run_contrast(const RunConfig& config, const StageOptions& options) {
  StageRun run(config, "contrast");
  run.require("prepare", "prepare");
  const json stage_config = {{"sampler", config.to_json()["sampler"]}, {"seed", config.seed}};
  if (run.keyed(stage_config, options.force)) return run.skipped();

  const auto train = load_split(config, kg::Split::train);
  std::unique_ptr<contrast::Paraphraser> paraphraser;
  if (config.sampler.paraphraser == "remote") {
    HttpEndpoint endpoint{config.sampler.paraphraser_endpoint,
                          std::chrono::milliseconds(config.sampler.paraphraser_timeout_ms), {}};
    paraphraser = std::make_unique<contrast::RemoteParaphraser>(endpoint);
  } else {
    contrast::OfflineParaphraser::Options po;
    po.synonyms = contrast::OfflineParaphraser::default_synonyms();
    po.reorder_clauses = config.sampler.reorder_clauses;
    po.substitution_rate = config.sampler.substitution_rate;
    paraphraser = std::make_unique<contrast::OfflineParaphraser>(po);
  }
  const std::uint64_t seed = mix_seed(config.seed, kContrastSalt);
  const auto negatives = static_cast<std::size_t>(config.sampler.negatives);
  std::vector<contrast::ContrastiveSet> sets;
  for (const auto& s : train) {
    if (!s.reference) continue;
    contrast::ContrastiveSet set;
    set.anchor_id = s.id;
    set.positives = contrast::make_positives(s, *paraphraser, config.sampler.positives, seed);
    set.negatives = config.sampler.house_heuristic ? contrast::make_negatives_house(s, train, negatives, seed)
                                                   : contrast::make_negatives_random(s, train, negatives, seed);
    sets.push_back(std::move(set));
  }
  const fs::path out = run.dir() / "contrast" / "contrastive_sets.jsonl";
  contrast::write_contrastive_sets(out, sets);
  spdlog::info("built {} contrastive sets", sets.size());
  return run.finish({out}, {{"sets", sets.size()}});
}

StageResult run_bucket(const RunConfig& config, const StageOptions& options) {
  StageRun run(config, "bucket");
  run.require("prepare", "prepare");
  if (!config.scorer.stopwords.empty()) run.add_input(config.scorer.stopwords);
  const json stage_config = {{"scorer", config.to_json()["scorer"]},
                             {"max_source_length", config.model.max_source_length}};
  if (run.keyed(stage_config, options.force)) return run.skipped();

  std::unique_ptr<control::Scorer> scorer;
  if (config.scorer.name == "remote") {
    HttpEndpoint endpoint{config.scorer.endpoint, std::chrono::milliseconds(config.scorer.timeout_ms), {}};
    scorer = std::make_unique<control::RemoteScorer>(config.scorer.remote_name, endpoint);
  } else if (!config.scorer.stopwords.empty()) {
    scorer = std::make_unique<control::LexicalOverlapScorer>(
        control::LexicalOverlapScorer::load_stopwords(config.scorer.stopwords));
  } else {
    scorer = std::make_unique<control::LexicalOverlapScorer>();
  }
  const auto train = load_split(config, kg::Split::train);
  std::vector<control::FaithfulnessScore> scores;
  for (const auto& s : train) {
    if (!s.reference) continue;
    scores.push_back(control::score_faithfulness(s.id, kg::linearize(s.graph, source_budget(config)), *s.reference,
                                                 *scorer));
  }
  const auto buckets = control::assign_buckets(scores);
  const fs::path dir = run.dir() / "bucket";
  control::write_bucket_file(dir / "buckets.jsonl", buckets);
  write_json(dir / "summary.json", buckets.summary());
  spdlog::info("bucketed {} samples: {}/{}/{}", scores.size(), buckets.sizes[0], buckets.sizes[1], buckets.sizes[2]);
  return run.finish({dir / "buckets.jsonl", dir / "summary.json"}, buckets.summary());
}

namespace {

template <typename T>
json train_with(const RunConfig& config, const StageOptions& options, const std::string& key,
                const std::vector<model::TrainExample>& examples, const kg::Vocabulary& vocab, const fs::path& dir,
                bool& completed) {
  model::ModelConfig mc = config.model;
  mc.vocab_size = static_cast<int>(vocab.size());
  mc.seed = config.seed;
  model::TrainOptions to;
  to.ablation = ablation_of(config, options);
  to.learning_rate = mc.learning_rate;
  to.contrastive_weight = config.training.contrastive_weight;
  to.contrastive.temperature = config.training.temperature;
  to.contrastive.include_positive_in_denominator = config.training.include_positive_in_denominator;

  model::Seq2Seq<T> net(mc);
  model::Trainer<T> trainer(net, to, mix_seed(config.seed, kShuffleSalt));
  const fs::path checkpoint = dir / "checkpoint.bin";
  const fs::path log_path = dir / "train_log.jsonl";

  if (options.resume && fs::exists(checkpoint)) {
    const auto header = model::read_checkpoint_header(checkpoint);
    if (header.metadata.value("key", std::string()) != key) {
      throw ConfigError("checkpoint " + checkpoint.string() + " belongs to a different configuration; rerun without --resume");
    }
    model::load_checkpoint(checkpoint, net, &trainer);
    std::vector<json> kept;
    if (fs::exists(log_path)) {
      for (auto& row : read_jsonl(log_path)) {
        if (row.at("step").get<std::int64_t>() <= header.adam_steps) kept.push_back(std::move(row));
      }
    }
    write_jsonl(log_path, kept);
    spdlog::info("resuming {} at epoch {} (step {})", model::to_string(to.ablation), header.epoch, header.adam_steps);
  } else {
    fs::create_directories(dir);
    std::ofstream(log_path, std::ios::trunc);
  }

  std::ofstream log(log_path, std::ios::app);
  json last_epoch;
  while (trainer.epoch() < config.training.epochs) {
    net.set_training(true);
    double sum_cl = 0.0, sum_ce = 0.0;
    std::size_t tokens = 0;
    trainer.run_epoch(examples, [&](const model::StepRecord& r) {
      json row = {{"step", r.step}, {"epoch", r.epoch}, {"l_cl", r.loss.l_cl}, {"l_ce", r.loss.l_ce},
                  {"total", r.loss.total}, {"tokens", r.loss.tokens}};
      log << row.dump() << '\n';
      sum_cl += r.loss.l_cl;
      sum_ce += r.loss.l_ce;
      tokens += r.loss.tokens;
    });
    log.flush();
    const json metadata = {{"key", key}, {"ablation", model::to_string(to.ablation)}};
    model::save_checkpoint(checkpoint, net, &trainer, vocab.hash(), metadata);
    last_epoch = {{"epoch", trainer.epoch()},
                  {"l_cl_per_sample", sum_cl / static_cast<double>(examples.size())},
                  {"l_ce_per_token", tokens ? sum_ce / static_cast<double>(tokens) : 0.0}};
    spdlog::info("epoch {}/{}: l_cl/sample {:.4f}, l_ce/token {:.4f}", trainer.epoch(), config.training.epochs,
                 last_epoch["l_cl_per_sample"].get<double>(), last_epoch["l_ce_per_token"].get<double>());
    if (options.stop_after_epoch && trainer.epoch() >= *options.stop_after_epoch &&
        trainer.epoch() < config.training.epochs) {
      completed = false;
      return last_epoch;
    }
  }
  completed = true;
  return last_epoch;
}

}  // namespace

StageResult run_train(const RunConfig& config, const StageOptions& options) {
  const Ablation ablation = ablation_of(config, options);
  StageRun run(config, train_stage_id(ablation));
  run.require("prepare", "prepare");
  if (model::uses_contrastive(ablation)) run.require("contrast", "contrast");
  if (model::uses_control_token(ablation)) run.require("bucket", "bucket");
  json training = config.to_json()["training"];
  training["ablation"] = model::to_string(ablation);
  const json stage_config = {{"model", config.to_json()["model"]}, {"training", training}, {"seed", config.seed}};
  if (run.keyed(stage_config, options.force) && !options.resume) return run.skipped();

  const auto train = load_split(config, kg::Split::train);
  std::vector<contrast::ContrastiveSet> sets;
  if (model::uses_contrastive(ablation)) sets = contrast::read_contrastive_sets(run.dir() / "contrast" / "contrastive_sets.jsonl");
  std::optional<control::BucketAssignment> buckets;
  if (model::uses_control_token(ablation)) buckets = control::read_bucket_file(run.dir() / "bucket" / "buckets.jsonl");

  kg::Vocabulary vocab = kg::Vocabulary::load(run.dir() / "prepare" / "vocab.json");
  for (const auto& set : sets) {
    for (const auto& p : set.positives) {
      for (const auto& tok : kg::split_text(p)) vocab.add(tok);
    }
    for (const auto& n : set.negatives) {
      for (const auto& tok : kg::split_text(n.text)) vocab.add(tok);
    }
  }
  ExampleOptions eo{ablation, source_budget(config), static_cast<std::size_t>(config.model.max_target_length)};
  const auto examples = build_train_examples(train, buckets ? &*buckets : nullptr, sets, vocab, eo);
  if (examples.empty()) throw DataError("no training sample has a reference text");

  const fs::path dir = run.dir() / "train" / model::to_string(ablation);
  fs::create_directories(dir);
  vocab.save(dir / "vocab.json");
  bool completed = false;
  const json summary = config.training.precision == model::Precision::float32
                           ? train_with<float>(config, options, run.key(), examples, vocab, dir, completed)
                           : train_with<double>(config, options, run.key(), examples, vocab, dir, completed);
  StageResult partial;
  if (!completed) {
    partial.stage = train_stage_id(ablation);
    partial.outputs = {dir / "checkpoint.bin", dir / "vocab.json", dir / "train_log.jsonl"};
    partial.summary = summary;
    return partial;
  }
  json details = summary;
  details["examples"] = examples.size();
  details["precision"] = model::to_string(config.training.precision);
  return run.finish({dir / "checkpoint.bin", dir / "vocab.json", dir / "train_log.jsonl"}, details);
}

namespace {

template <typename T>
std::vector<json> generate_with(const RunConfig& config, const fs::path& train_dir,
                                const std::vector<kg::TextSample>& samples, std::optional<HallucinationTag> tag) {
  const fs::path checkpoint = train_dir / "checkpoint.bin";
  const auto header = model::read_checkpoint_header(checkpoint);
  const kg::Vocabulary vocab = kg::Vocabulary::load(train_dir / "vocab.json");
  if (vocab.hash() != header.vocab_hash) throw DataError("vocabulary does not match checkpoint " + checkpoint.string());
  model::Seq2Seq<T> net(header.config);
  model::load_checkpoint<T>(checkpoint, net, nullptr);
  model::DecodeOptions decode = config.decode;
  decode.max_source_tokens = static_cast<std::size_t>(header.config.max_source_length);
  std::vector<json> rows;
  for (const auto& s : samples) {
    const auto result = model::generate(net, vocab, s.graph, tag, decode);
    rows.push_back({{"id", s.id},
                    {"tag", tag ? json(std::string(control::tag_name(*tag))) : json(nullptr)},
                    {"text", kg::detokenize(result.tokens, vocab)},
                    {"tokens", result.tokens},
                    {"log_probs", result.log_probs},
                    {"finished", result.finished}});
  }
  return rows;
}

std::vector<kg::TextSample> eval_samples(const RunConfig& config) {
  auto samples = load_split(config, kg::split_from_string(config.eval.split));
  if (config.eval.max_samples > 0 && samples.size() > config.eval.max_samples) samples.resize(config.eval.max_samples);
  if (samples.empty()) throw DataError("the " + config.eval.split + " split has no samples to evaluate");
  return samples;
}

}  // namespace

StageResult run_generate(const RunConfig& config, const StageOptions& options) {
  const Ablation ablation = ablation_of(config, options);
  const auto tag = tag_of(ablation, options);
  StageRun run(config, generate_stage_id(ablation, tag));
  run.require("prepare", "prepare");
  const auto& trained = run.require(train_stage_id(ablation), "train --ablation " + model::to_string(ablation));
  const json stage_config = {{"decode", config.decode.to_json()}, {"eval", config.to_json()["eval"]},
                             {"tag", tag_dir(tag)}};
  if (run.keyed(stage_config, options.force)) return run.skipped();

  const auto samples = eval_samples(config);
  const fs::path train_dir = run.dir() / "train" / model::to_string(ablation);
  const std::string precision = trained.details.value("precision", std::string("float64"));
  const auto rows = model::precision_from_string(precision) == model::Precision::float32
                        ? generate_with<float>(config, train_dir, samples, tag)
                        : generate_with<double>(config, train_dir, samples, tag);
  const fs::path out = run.dir() / "generate" / model::to_string(ablation) / tag_dir(tag) / "generations.jsonl";
  write_jsonl(out, rows);
  spdlog::info("generated {} texts with tag {}", rows.size(), tag_dir(tag));
  return run.finish({out}, {{"generations", rows.size()}, {"tag", tag_dir(tag)}});
}

StageResult run_evaluate(const RunConfig& config, const StageOptions& options) {
  const Ablation ablation = ablation_of(config, options);
  const auto tag = tag_of(ablation, options);
  const std::string judge_kind = judge_of(config, options);
  StageRun run(config, evaluate_stage_id(ablation, tag, judge_kind));
  run.require("prepare", "prepare");
  run.require(generate_stage_id(ablation, tag), "generate --ablation " + model::to_string(ablation));
  if (!config.judge.fixture.empty()) run.add_input(config.judge.fixture);
  json judge_config = config.to_json()["judge"];
  judge_config["kind"] = judge_kind;
  const json stage_config = {{"judge", judge_config}, {"eval", config.to_json()["eval"]},
                             {"max_source_length", config.model.max_source_length}};
  if (run.keyed(stage_config, options.force)) return run.skipped();

  std::unique_ptr<eval::JudgeClient> judge;
  eval::JudgeOptions jo;
  jo.fluency = config.judge.fluency;
  if (judge_kind == "remote") {
    judge = std::make_unique<eval::RemoteJudge>(config.judge.remote);
    jo.max_in_flight = config.judge.remote.max_in_flight;
  } else if (!config.judge.fixture.empty()) {
    judge = std::make_unique<eval::MockJudge>(eval::read_judge_fixture(config.judge.fixture));
  } else {
    judge = std::make_unique<eval::MockJudge>();
  }
  const eval::TemplateSet templates =
      config.judge.templates.empty() ? eval::TemplateSet::builtin() : eval::TemplateSet::load(config.judge.templates);

  const auto train = load_split(config, kg::Split::train);
  const auto salient = eval::rank_salient_features(train, 10);
  const auto samples = eval_samples(config);
  std::map<std::string, const kg::TextSample*> by_id;
  for (const auto& s : samples) by_id[s.id] = &s;

  const fs::path gen_path = run.dir() / "generate" / model::to_string(ablation) / tag_dir(tag) / "generations.jsonl";
  std::vector<eval::SampleReport> reports;
  std::vector<json> transcripts;
  std::vector<eval::Tokens> candidates, references;
  for (const auto& row : read_jsonl(gen_path)) {
    const std::string id = row.at("id").get<std::string>();
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("generation '" + id + "' has no sample in the " + config.eval.split + " split");
    const kg::TextSample& sample = *it->second;
    const std::string text = row.at("text").get<std::string>();
    const auto linearized = kg::linearize(sample.graph, source_budget(config));
    auto e = eval::evaluate_sample(id, linearized, text, *judge, templates, salient, jo);
    eval::SampleReport r;
    r.id = id;
    r.prh = e.prh;
    r.salient = e.salient;
    r.fluency = e.fluency;
    if (sample.reference) {
      const auto cand = kg::split_text(text);
      const auto ref = kg::split_text(*sample.reference);
      r.bleu = cand.empty() ? 0.0 : eval::bleu4(cand, ref);
      r.rouge_l = eval::rouge_l(cand, ref);
      candidates.push_back(cand);
      references.push_back(ref);
    }
    reports.push_back(std::move(r));
    transcripts.push_back(e.transcript.to_json());
  }
  const double corpus_bleu = candidates.empty() ? 0.0 : eval::corpus_bleu4(candidates, references);
  const auto corpus = eval::aggregate(reports, corpus_bleu);

  const fs::path dir = run.dir() / "evaluate" / model::to_string(ablation) / tag_dir(tag) / judge_kind;
  json per_sample = json::array();
  for (const auto& r : reports) per_sample.push_back(r.to_json());
  write_json(dir / "samples.json", per_sample);
  eval::write_sample_csv(dir / "samples.csv", reports);
  write_jsonl(dir / "transcripts.jsonl", transcripts);
  const json report = {{"ablation", model::to_string(ablation)},
                       {"tag", tag_dir(tag)},
                       {"judge", judge->name()},
                       {"salient", salient},
                       {"corpus", corpus.to_json()}};
  write_json(dir / "report.json", report);
  spdlog::info("evaluated {} samples: P {:.4f} R {:.4f} H {:.4f}", corpus.samples, corpus.avg_precision,
               corpus.avg_recall, corpus.avg_hallucination);
  return run.finish({dir / "samples.json", dir / "samples.csv", dir / "transcripts.jsonl", dir / "report.json"},
                    report);
}

namespace {

std::string run_name(const fs::path& dir) {
  const fs::path normal = dir.lexically_normal();
  return normal.has_filename() ? normal.filename().string() : normal.parent_path().filename().string();
}

}  // namespace

StageResult run_report(const std::vector<fs::path>& run_dirs, const fs::path& out_dir) {
  if (run_dirs.empty()) throw ConfigError("report needs at least one run directory");
  std::vector<ReportRow> rows;
  std::vector<ArtifactRecord> inputs;
  std::optional<std::set<std::string>> schema;
  for (const auto& dir : run_dirs) {
    const Manifest manifest = Manifest::load(dir);
    bool found = false;
    for (const auto& [stage, record] : manifest.stages()) {
      if (!stage.starts_with("evaluate/")) continue;
      manifest.require(stage, "evaluate");
      for (const auto& out : record.outputs) {
        if (!out.path.ends_with("report.json")) continue;
        const fs::path path = manifest.resolve(out.path);
        const json report = read_json(path);
        std::set<std::string> keys;
        for (const auto& [k, v] : report.at("corpus").items()) keys.insert(k);
        if (schema && *schema != keys) throw DataError("incompatible report schema in " + path.string());
        schema = keys;
        rows.push_back({run_name(dir), report.at("ablation").get<std::string>(),
                        report.at("tag").get<std::string>(), report.at("judge").get<std::string>(),
                        report.at("corpus")});
        inputs.push_back({path.string(), sha256_file(path)});
        found = true;
      }
    }
    if (!found) throw UpstreamMissingError("run " + dir.string() + " has no evaluation report; run `faithgen evaluate` first");
  }
  fs::create_directories(out_dir);
  write_comparison_csv(out_dir / "comparison.csv", rows);
  write_prh_chart(out_dir / "prh.svg", rows);
  json merged = json::array();
  for (const auto& r : rows) {
    merged.push_back({{"run", r.run}, {"ablation", r.ablation}, {"tag", r.tag}, {"judge", r.judge}, {"corpus", r.corpus}});
  }
  write_json(out_dir / "comparison.json", merged);

  Manifest manifest = Manifest::load(out_dir);
  StageRecord record;
  record.stage = "report";
  record.inputs = inputs;
  json basis = json::array();
  for (const auto& in : inputs) basis.push_back(in.sha256);
  record.key = sha256_hex(basis.dump());
  record.started = record.finished = utc_timestamp();
  const std::vector<fs::path> outputs = {out_dir / "comparison.csv", out_dir / "prh.svg", out_dir / "comparison.json"};
  for (const auto& p : outputs) record.outputs.push_back(manifest.artifact(p));
  record.details = {{"rows", rows.size()}};
  manifest.put(record);
  manifest.save();
  StageResult result;
  result.stage = "report";
  result.outputs = outputs;
  result.summary = record.details;
  return result;
}

}  // namespace faithgen::pipeline
