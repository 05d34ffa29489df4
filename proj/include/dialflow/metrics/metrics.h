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

// Reference-based response metrics over word sequences (see split_words).
// None of them is symmetric in general; callers pass the scored text as
// `hyp` and the text it is compared against as `ref`. Every metric throws
// std::invalid_argument on an empty input.

#ifndef DIALFLOW_METRICS_METRICS_H_
#define DIALFLOW_METRICS_METRICS_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialflow/metrics/embedding_table.h"

namespace dialflow {

using WordSpan = std::span<const std::string>;

// Unsmoothed BLEU with max order min(4, |hyp|, |ref|) and brevity penalty
// exp(min(0, 1 - |ref|/|hyp|)). Any zero n-gram precision gives 0.
double bleu(WordSpan hyp, WordSpan ref);

struct MeteorParams {
  double alpha = 0.9;  // recall weight
  double gamma = 0.5;  // fragmentation penalty weight
  double beta = 3.0;   // fragmentation penalty exponent

  void validate() const;
};

struct MeteorAlignment {
  size_t matches = 0;
  size_t chunks = 0;
  // ref position for each hyp position, nullopt when unmatched.
  std::vector<std::optional<size_t>> hyp_to_ref;
  // False when the search hit its node budget and returned the best
  // alignment found so far.
  bool exhaustive = true;
};

// Exact unigram alignment with the maximum number of matches and, among
// those, the fewest chunks. Ties go to the alignment whose ref positions,
// read in hyp order, are lexicographically smallest.
MeteorAlignment meteor_align(WordSpan hyp, WordSpan ref);

// Fmean * (1 - gamma * (chunks / m)^beta), with Fmean = P R / (alpha P +
// (1 - alpha) R). Exact matching only.
double meteor_lite(WordSpan hyp, WordSpan ref, const MeteorParams& params = {});

// F1 of greedy best-match cosine similarities (negatives clamped to 0).
double greedy_embed_score(WordSpan hyp, WordSpan ref, const EmbeddingTable& table);

using Metric = std::function<double(WordSpan hyp, WordSpan ref)>;

// "meteor", "bleu" or "embed". `table` must outlive the returned metric and
// is required for "embed".
Metric metric_by_name(std::string_view name, const EmbeddingTable* table = nullptr);

}  // namespace dialflow

#endif  // DIALFLOW_METRICS_METRICS_H_
