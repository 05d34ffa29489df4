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

// Stand-in scorers for the cascade: a coherence score mixing model
// likelihood with embedding similarity, and a surface-form rank score.

#ifndef DIALFLOW_SCORING_SCORERS_H_
#define DIALFLOW_SCORING_SCORERS_H_

#include <span>

#include "dialflow/core/dialogue.h"
#include "dialflow/metrics/embedding_table.h"
#include "dialflow/model/planning_model.h"

namespace dialflow {

struct RankWeights {
  double distinct = 0.4;
  double length = 0.4;
  double novelty = 0.2;
  double target_len = 15.0;
  double length_sigma = 7.0;
};

double logistic(double x);

// Mean log-probability of the candidate and its closing separator after
// `context`, oldest turns dropped to fit. Errors: empty candidate.
double mean_log_prob(const PlanningModel& model, std::span<const Utterance> context,
                     std::string_view candidate);

// Cosine of mean word vectors, clamped to [0, 1]; identical word sequences
// score exactly 1, an empty side scores 0.
double embedding_similarity(const EmbeddingTable& table, const Words& a, const Words& b);

// alpha * logistic(mean_log_prob) + (1 - alpha) * embedding_similarity with
// the last context turn. Errors: empty candidate, alpha outside [0, 1].
double coherence_score(std::span<const Utterance> context, std::string_view candidate,
                       const PlanningModel& model, const EmbeddingTable& table, double alpha);

// Unique bigrams over bigrams; 0 with fewer than two tokens.
double distinct_bigram_ratio(const Words& w);

// Largest, over context turns, fraction of the candidate's trigrams found in
// that turn; 0 when the candidate has fewer than three tokens.
double max_trigram_overlap(std::span<const Utterance> context, const Words& w);

// distinct * ratio + length * exp(-(len - target)^2 / (2 sigma^2))
//   + novelty * (1 - overlap). Errors: empty candidate.
double rank_score(std::span<const Utterance> context, std::string_view candidate,
                  const RankWeights& weights = {});

}  // namespace dialflow

#endif  // DIALFLOW_SCORING_SCORERS_H_
