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

#include <cstdint>
#include <vector>

#include "faithgen/eval/judge.hpp"
#include "faithgen/kg/graph.hpp"

namespace faithgen::synth {

struct JudgeFixture {
  std::vector<kg::TextSample> samples;
  std::vector<eval::JudgeFixtureEntry> entries;
};

/// Mock-judge answers over House-style graphs. Input-fact lists repeat some
/// facts in another case, yes/no replies vary in form (a few are
/// unparseable and mean "no"), extrinsic and intrinsic lists overlap at
/// times, and a few samples have no output facts at all.
JudgeFixture judge_fixture(std::size_t samples = 50, std::uint64_t seed = 2024);

}  // namespace faithgen::synth
