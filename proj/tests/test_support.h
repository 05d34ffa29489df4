// Copyright 2026 The Dialflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared fixtures and reference implementations for the tests. The
// references are deliberately naive restatements of each rule; they share
// no code with the library beyond tokenization.

#ifndef DIALFLOW_TESTS_TEST_SUPPORT_H_
#define DIALFLOW_TESTS_TEST_SUPPORT_H_

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dialflow/core/dialogue.h"
#include "dialflow/core/rng.h"
#include "dialflow/metrics/metrics.h"
#include "dialflow/model/planning_model.h"
#include "dialflow/scoring/cascade.h"

namespace dialflow::testing {

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

// Small model trained for a few epochs on a synthetic corpus; built once.
const PlanningModel& tiny_trained_model();

// Same shape as tiny_trained_model() with random weights.
PlanningModel random_model(uint64_t seed, ModelParams::Init init = ModelParams::Init::kRandom);

// Random lowercase token string over a tiny alphabet so candidates overlap.
std::string random_sentence(Rng& rng, size_t min_len, size_t max_len, size_t alphabet);

// ---- reference implementations

// Unigram-overlap F1 on word multisets.
double unigram_f1(WordSpan hyp, WordSpan ref);

struct RefEnsemble {
  size_t selected = 0;
  std::vector<double> scores;
};
RefEnsemble ensemble_reference(std::span<const Words> cands, const Metric& metric);

// Sort by (-p, id), take the shortest prefix with mass >= p.
std::set<TokenId> nucleus_reference(std::span<const double> dist, double p);

// Argmax decoding straight from next_logits: ordinary words only, the
// separator allowed after the first step, ties to the lower id.
std::vector<TokenId> greedy_decode(const PlanningModel& m, std::span<const Utterance> hist,
                                   const PlanResult* plan, int max_len);

// Spearman correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

struct RefSelection {
  std::optional<size_t> selected;
  bool fallback = false;
  std::string response;
};
// Straight-line composition of the four selection stages.
RefSelection cascade_reference(std::span<const Utterance> ctx, std::span<const std::string> cands,
                               const CascadeConfig& cfg, const Scorers& s);

}  // namespace dialflow::testing

#endif  // DIALFLOW_TESTS_TEST_SUPPORT_H_
