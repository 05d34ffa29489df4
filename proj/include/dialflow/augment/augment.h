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

// Training-time augmentation: truncated dialogues vary topic depth,
// concatenated dialogues introduce abrupt topic changes.

#ifndef DIALFLOW_AUGMENT_AUGMENT_H_
#define DIALFLOW_AUGMENT_AUGMENT_H_

#include <optional>
#include <span>

#include "dialflow/core/dialogue.h"
#include "dialflow/core/rng.h"

namespace dialflow {

struct AugmentConfig {
  double p_truncate = 0.2;
  double p_concat = 0.1;
  size_t min_turns = 2;

  // Probabilities in [0,1], summing to at most 1; min_turns >= 1.
  void validate() const;
};

// First `keep` turns. Errors: keep == 0 or keep > |turns|.
Dialogue truncate_at(const Dialogue& d, size_t keep);

// Keeps a uniformly drawn prefix length in [min_turns, |turns| - 1], or
// returns d unchanged when it has exactly min_turns turns. Errors:
// |turns| < min_turns.
Dialogue truncate_dialogue(const Dialogue& d, Rng& rng, size_t min_turns = 2);

// c's turns followed by b's, with b's speakers flipped when needed to keep
// alternation across the seam. Facts are concatenated; id is "c.id+b.id".
Dialogue concat_dialogues(const Dialogue& c, const Dialogue& b);

enum class AugmentBranch { kRaw, kTruncate, kConcat };

struct AugmentSample {
  Dialogue dialogue;
  AugmentBranch branch = AugmentBranch::kRaw;
  size_t source = 0;
  std::optional<size_t> second_source;
};

// With probability p_truncate a truncated random dialogue; with p_concat a
// truncated random dialogue followed by a different random dialogue;
// otherwise a random dialogue unchanged. Dialogues shorter than min_turns
// are never truncated. A single-dialogue corpus concatenates with itself.
// Errors: empty corpus.
AugmentSample sample_training_dialogue(std::span<const Dialogue> corpus, const AugmentConfig& cfg,
                                       Rng& rng);

}  // namespace dialflow

#endif  // DIALFLOW_AUGMENT_AUGMENT_H_
