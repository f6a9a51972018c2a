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

#include "faithgen/model/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "faithgen/common/error.hpp"
#include "faithgen/kg/linearize.hpp"

namespace faithgen::model {

using kg::Vocabulary;

nlohmann::json DecodeOptions::to_json() const {
  return {{"strategy", strategy == DecodeStrategy::greedy ? "greedy" : "beam"},
          {"beam_width", beam_width},
          {"max_length", max_length}};
}

DecodeOptions DecodeOptions::from_json(const nlohmann::json& j) {
  DecodeOptions o;
  if (!j.is_object()) throw ConfigError("decode config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "strategy") {
      const auto s = value.get<std::string>();
      if (s == "greedy") {
        o.strategy = DecodeStrategy::greedy;
      } else if (s == "beam") {
        o.strategy = DecodeStrategy::beam;
      } else {
        throw ConfigError("unknown decode strategy '" + s + "'");
      }
    } else if (key == "beam_width") {
      o.beam_width = value.get<int>();
    } else if (key == "max_length") {
      o.max_length = value.get<std::size_t>();
    } else {
      throw ConfigError("unknown decode option '" + key + "'");
    }
  }
  if (o.beam_width < 1) throw ConfigError("beam_width must be at least 1");
  return o;
}

double DecodingResult::total_log_prob() const noexcept {
  return std::accumulate(log_probs.begin(), log_probs.end(), 0.0);
}

namespace {

bool emittable(TokenId id) {
  return id != Vocabulary::kPad && id != Vocabulary::kBos && id != Vocabulary::kHalLow &&
         id != Vocabulary::kHalMedium && id != Vocabulary::kHalHigh;
}

template <typename T>
std::size_t resolve_length(const Seq2Seq<T>& model, std::size_t max_length) {
  const auto limit = static_cast<std::size_t>(model.config().max_target_length);
  if (max_length == 0) return limit;
  if (max_length > limit) throw ConfigError("max_length exceeds the model's max_target_length");
  return max_length;
}

struct Hypothesis {
  std::vector<TokenId> tokens;
  std::vector<double> log_probs;
  double score = 0.0;
};

// Better-first order: score, then shorter, then lexicographic ids.
bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
  return a.tokens < b.tokens;
}

}  // namespace

template <typename T>
DecodingResult decode_greedy(Seq2Seq<T>& model, std::span<const TokenId> source, std::size_t max_length) {
  const std::size_t limit = resolve_length(model, max_length);
  const bool was_training = model.training();
  model.set_training(false);
  Tape<T> tape;
  const auto encoded = model.encode(tape, source);
  const std::size_t mark = tape.size();
  DecodingResult out;
  while (out.tokens.size() < limit) {
    const auto lp = model.next_log_probs(encoded, tape, out.tokens);
    tape.truncate(mark);
    TokenId best = -1;
    for (std::size_t id = 0; id < lp.size(); ++id) {
      const auto tid = static_cast<TokenId>(id);
      if (!emittable(tid)) continue;
      if (best < 0 || lp[id] > lp[static_cast<std::size_t>(best)]) best = tid;
    }
    out.tokens.push_back(best);
    out.log_probs.push_back(lp[static_cast<std::size_t>(best)]);
    if (best == Vocabulary::kEos) {
      out.finished = true;
      break;
    }
  }
  model.set_training(was_training);
  return out;
}

template <typename T>
DecodingResult decode_beam(Seq2Seq<T>& model, std::span<const TokenId> source, int width, std::size_t max_length) {
  if (width < 1) throw ConfigError("beam width must be at least 1");
  const std::size_t limit = resolve_length(model, max_length);
  const auto w = static_cast<std::size_t>(width);
  const bool was_training = model.training();
  model.set_training(false);
  Tape<T> tape;
  const auto encoded = model.encode(tape, source);
  const std::size_t mark = tape.size();

  std::vector<Hypothesis> live(1);
  std::vector<Hypothesis> done;
  while (!live.empty()) {
    std::vector<Hypothesis> candidates;
    for (const auto& h : live) {
      const auto lp = model.next_log_probs(encoded, tape, h.tokens);
      tape.truncate(mark);
      // Only the w best extensions of each hypothesis can survive.
      std::vector<TokenId> ids;
      for (std::size_t id = 0; id < lp.size(); ++id) {
        if (emittable(static_cast<TokenId>(id))) ids.push_back(static_cast<TokenId>(id));
      }
      const std::size_t keep = std::min(w, ids.size());
      std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(keep), ids.end(),
                        [&](TokenId a, TokenId b) {
                          const double la = lp[static_cast<std::size_t>(a)];
                          const double lb = lp[static_cast<std::size_t>(b)];
                          return la != lb ? la > lb : a < b;
                        });
      for (std::size_t k = 0; k < keep; ++k) {
        Hypothesis c = h;
        c.tokens.push_back(ids[k]);
        c.log_probs.push_back(lp[static_cast<std::size_t>(ids[k])]);
        c.score += c.log_probs.back();
        candidates.push_back(std::move(c));
      }
    }
    std::sort(candidates.begin(), candidates.end(), better);
    candidates.resize(std::min(w, candidates.size()));
    live.clear();
    for (auto& c : candidates) {
      if (c.tokens.back() == Vocabulary::kEos || c.tokens.size() >= limit) {
        done.push_back(std::move(c));
      } else {
        live.push_back(std::move(c));
      }
    }
    std::sort(done.begin(), done.end(), better);
    // Scores only decrease as hypotheses grow, so a full set of completed
    // hypotheses that beat every live one is final.
    if (done.size() >= w && !live.empty() && done[w - 1].score >= live.front().score) live.clear();
  }
  model.set_training(was_training);
  const Hypothesis& best = done.front();
  DecodingResult out;
  out.tokens = best.tokens;
  out.log_probs = best.log_probs;
  out.finished = best.tokens.back() == Vocabulary::kEos;
  return out;
}

std::vector<TokenId> generation_source(const kg::KGGraph& graph, std::optional<control::HallucinationTag> tag,
                                       const kg::Vocabulary& vocab, std::size_t max_source_tokens) {
  const auto linearized = kg::linearize(graph, max_source_tokens);
  const std::string text = tag ? control::apply_control_token(linearized, *tag) : linearized.text;
  return kg::tokenize_source(text, vocab);
}

template <typename T>
DecodingResult generate(Seq2Seq<T>& model, const kg::Vocabulary& vocab, const kg::KGGraph& graph,
                        std::optional<control::HallucinationTag> tag, const DecodeOptions& options) {
  const auto source = generation_source(graph, tag, vocab, options.max_source_tokens);
  DecodingResult out = options.strategy == DecodeStrategy::greedy
                           ? decode_greedy(model, source, options.max_length)
                           : decode_beam(model, source, options.beam_width, options.max_length);
  out.tag = tag;
  return out;
}

#define FAITHGEN_INSTANTIATE(T)                                                                            \
  template DecodingResult decode_greedy<T>(Seq2Seq<T>&, std::span<const TokenId>, std::size_t);           \
  template DecodingResult decode_beam<T>(Seq2Seq<T>&, std::span<const TokenId>, int, std::size_t);        \
  template DecodingResult generate<T>(Seq2Seq<T>&, const kg::Vocabulary&, const kg::KGGraph&,              \
                                      std::optional<control::HallucinationTag>, const DecodeOptions&);
FAITHGEN_INSTANTIATE(float)
FAITHGEN_INSTANTIATE(double)
#undef FAITHGEN_INSTANTIATE

}  // namespace faithgen::model
