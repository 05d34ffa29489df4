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

#ifndef DIALFLOW_MODEL_GENERATE_H_
#define DIALFLOW_MODEL_GENERATE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dialflow/core/rng.h"
#include "dialflow/model/planning_model.h"

namespace dialflow {

// Smallest set of tokens, taken in order of descending probability (ties by
// ascending id), whose cumulative mass reaches p. p = 1 keeps every token
// with nonzero mass. Throws std::invalid_argument when the distribution has
// a negative or non-finite entry, does not sum to 1 within 1e-9, or when p
// is outside (0, 1].
std::vector<TokenId> nucleus(std::span<const double> dist, double p);

struct Candidate {
  std::string text;
  std::vector<TokenId> tokens;
  bool planned = false;
  uint64_t seed = 0;
};

// One decoding step as seen by the sampler.
struct StepRecord {
  std::vector<double> dist;  // masked, renormalized step distribution
  std::vector<TokenId> nucleus;
  TokenId token;
};

struct GenerateOptions {
  double top_p = 0.9;
  int max_len = 24;
  std::function<void(const StepRecord&)> observer;
};

// Softmax of `logits` restricted to ordinary words plus `stop`; `stop` is
// excluded at step 0 so responses are never empty.
std::vector<double> step_distribution(const RowVec& logits, TokenId stop, size_t step);

// Drops the oldest turns until the history fits the model's sequence and
// utterance limits with room for a response of max_len tokens.
std::span<const Utterance> fit_history(const PlanningModel& model,
                                       std::span<const Utterance> history, int max_len);

// Samples the next turn after `history` in dialogue layout; with a plan
// every step is conditioned on plan->delta. Stops at [SEP] or max_len.
Candidate generate(const PlanningModel& model, std::span<const Utterance> history,
                   const PlanResult* plan, const GenerateOptions& options, Rng& rng);

// Samples a response in grounded layout (facts, context, [BOS]); stops at
// [EOS] or max_len.
Candidate generate_grounded(const PlanningModel& model, std::span<const std::string> facts,
                            std::span<const Utterance> context, const GenerateOptions& options,
                            Rng& rng);

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_GENERATE_H_
