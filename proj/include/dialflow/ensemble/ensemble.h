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

// Consensus selection: the candidate that agrees most with the others under
// a pairwise metric.

#ifndef DIALFLOW_ENSEMBLE_ENSEMBLE_H_
#define DIALFLOW_ENSEMBLE_ENSEMBLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dialflow/core/dialogue.h"
#include "dialflow/metrics/metrics.h"
#include "dialflow/model/generate.h"

namespace dialflow {

struct EnsembleResult {
  size_t selected_index = 0;
  std::vector<double> scores;
};

// scores[i] = mean over j != i of metric(candidates[i], candidates[j]);
// a single candidate scores 0. Ties go to the lowest index.
// Errors: no candidates.
EnsembleResult ensemble_select(std::span<const Words> candidates, const Metric& metric);

struct GroundedOptions {
  size_t k = 60;
  double top_p = 0.9;
  int max_len = 24;
  uint64_t seed = 1;
  bool dedup = true;
};

struct GroundedResponse {
  std::string response;
  EnsembleResult ensemble;  // over `candidates` after deduplication
  std::vector<Candidate> samples;
  std::vector<std::string> candidates;
};

// Samples k grounded responses to `context` (its facts and turns), drops
// exact duplicates (first occurrence kept) when dedup is set, then selects
// by ensemble. Sample i uses seed mix_seed(seed, i).
// Errors: null model, k = 0.
GroundedResponse grounded_respond(const Dialogue& context, const PlanningModel* model,
                                  const Metric& metric, const GroundedOptions& options);

}  // namespace dialflow

#endif  // DIALFLOW_ENSEMBLE_ENSEMBLE_H_
