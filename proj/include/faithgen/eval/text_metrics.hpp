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

#include <span>
#include <string>
#include <vector>

namespace faithgen::eval {

using Tokens = std::vector<std::string>;

/// Sentence BLEU-4: geometric mean of clipped 1..4-gram precisions times the
/// brevity penalty, no smoothing. 0 when any precision is 0 or the
/// candidate is empty.
double bleu4(std::span<const std::string> candidate, std::span<const std::string> reference);

/// Corpus BLEU-4 from n-gram counts and lengths summed over all pairs.
double corpus_bleu4(std::span<const Tokens> candidates, std::span<const Tokens> references);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// LCS-based F1 (beta = 1); 0 when either side is empty.
double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

}  // namespace faithgen::eval
