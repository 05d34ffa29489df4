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

// Response selection cascade: abusive filter, coherence shortlist, conflict
// filter, final rank.

#ifndef DIALFLOW_SCORING_CASCADE_H_
#define DIALFLOW_SCORING_CASCADE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialflow/core/dialogue.h"
#include "dialflow/metrics/embedding_table.h"
#include "dialflow/model/planning_model.h"
#include "dialflow/scoring/abusive.h"
#include "dialflow/scoring/conflict.h"
#include "dialflow/scoring/scorers.h"
#include "json.hpp"

namespace dialflow {

enum class Stage { kAbusive, kCoherence, kConflict, kRank };
const char* stage_name(Stage s);

struct CascadeConfig {
  size_t k = 10;
  double alpha = 0.7;
  RankWeights rank;
  std::vector<std::string> fallbacks = {"could you tell me more about that ?",
                                        "that sounds interesting . what else is on your mind ?"};

  // k >= 1, alpha in [0, 1], rank weights non-negative summing to 1,
  // sigma > 0, at least one fallback.
  void validate() const;
};

struct ScoredCandidate {
  size_t index = 0;
  std::string text;
  Words tokens;
  std::map<std::string, double> scores;  // "coherence" (stage 1 survivors), "rank"
  bool abusive = false;
  bool conflict = false;
  std::string conflict_reason;
  std::optional<Stage> dropped_at;  // none for the selected candidate
};

struct Trace {
  std::vector<ScoredCandidate> candidates;
  std::optional<size_t> selected_index;
  bool fallback = false;
  std::string response;  // selected text or the fallback
  // Candidates dropped per stage; these plus the selected one sum to the
  // input count.
  size_t dropped_abusive = 0, dropped_coherence = 0, dropped_conflict = 0, dropped_rank = 0;
  std::vector<uint64_t> seeds;
  std::vector<bool> planned;

  nlohmann::json to_json() const;
};

// Pluggable stages; the defaults wrap the functions in scorers.h and
// conflict.h.
struct Scorers {
  std::function<double(std::span<const Utterance>, const std::string&)> coherence;
  std::function<double(std::span<const Utterance>, const std::string&)> rank;
  std::function<ConflictResult(std::span<const Utterance>, const std::string&)> conflict;
  const AbusiveLexicon* lexicon = nullptr;
};

// model, table, rules and lexicon must outlive the result.
Scorers default_scorers(const PlanningModel& model, const EmbeddingTable& table,
                        const NliRules& rules, const AbusiveLexicon& lexicon,
                        const CascadeConfig& cfg);

// Rejects fallbacks that contain an abusive token. Errors: none left.
std::vector<std::string> vet_fallbacks(std::span<const std::string> fallbacks,
                                       const AbusiveLexicon& lexicon);

// Errors: no candidates, empty candidate text, invalid config. When every
// candidate is eliminated the first fallback without a conflict is
// returned (the first fallback if all conflict) and trace.fallback is set.
Trace select_response(std::span<const Utterance> context, std::span<const std::string> candidates,
                      const CascadeConfig& cfg, const Scorers& scorers);

}  // namespace dialflow

#endif  // DIALFLOW_SCORING_CASCADE_H_
