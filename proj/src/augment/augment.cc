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

#include "dialflow/augment/augment.h"

#include <stdexcept>
#include <string>

namespace dialflow {

void AugmentConfig::validate() const {
  if (!(p_truncate >= 0.0 && p_truncate <= 1.0) || !(p_concat >= 0.0 && p_concat <= 1.0)) {
    throw std::invalid_argument("augment: probabilities must lie in [0, 1]");
  }
  if (p_truncate + p_concat > 1.0 + 1e-12) {
    throw std::invalid_argument("augment: p_truncate + p_concat must not exceed 1");
  }
  if (min_turns < 1) throw std::invalid_argument("augment: min_turns must be >= 1");
}

Dialogue truncate_at(const Dialogue& d, size_t keep) {
  if (keep == 0 || keep > d.turns.size()) {
    throw std::invalid_argument("truncate_at: keep=" + std::to_string(keep) + " outside [1, " +
                                std::to_string(d.turns.size()) + "]");
  }
  Dialogue out{d.id, d.facts, {d.turns.begin(), d.turns.begin() + static_cast<long>(keep)}};
  return out;
}

Dialogue truncate_dialogue(const Dialogue& d, Rng& rng, size_t min_turns) {
  if (d.turns.size() < min_turns) {
    throw std::invalid_argument("truncate_dialogue: dialogue '" + d.id + "' has " +
                                std::to_string(d.turns.size()) + " turns, fewer than " +
                                std::to_string(min_turns));
  }
  if (d.turns.size() == min_turns) return d;
  const auto keep = static_cast<size_t>(rng.uniform_range(static_cast<int64_t>(min_turns),
                                                          static_cast<int64_t>(d.turns.size()) - 1));
  return truncate_at(d, keep);
}

Dialogue concat_dialogues(const Dialogue& c, const Dialogue& b) {
  Dialogue out;
  out.id = c.id + "+" + b.id;
  out.facts = c.facts;
  out.facts.insert(out.facts.end(), b.facts.begin(), b.facts.end());
  out.turns = c.turns;
  const bool flip = !c.turns.empty() && !b.turns.empty() &&
                    c.turns.back().speaker == b.turns.front().speaker;
  for (auto u : b.turns) {
    if (flip) u.speaker = other(u.speaker);
    out.turns.push_back(std::move(u));
  }
  return out;
}

AugmentSample sample_training_dialogue(std::span<const Dialogue> corpus, const AugmentConfig& cfg,
                                       Rng& rng) {
  if (corpus.empty()) throw std::invalid_argument("sample_training_dialogue: empty corpus");
  cfg.validate();
  const double u = rng.uniform();
  AugmentSample s;
  s.source = rng.uniform_int(corpus.size());
  const Dialogue& a = corpus[s.source];
  auto maybe_truncate = [&](const Dialogue& d) {
    return d.turns.size() < cfg.min_turns ? d : truncate_dialogue(d, rng, cfg.min_turns);
  };
  if (u < cfg.p_truncate) {
    s.branch = AugmentBranch::kTruncate;
    s.dialogue = maybe_truncate(a);
  } else if (u < cfg.p_truncate + cfg.p_concat) {
    s.branch = AugmentBranch::kConcat;
    size_t second = s.source;
    if (corpus.size() > 1) {
      second = rng.uniform_int(corpus.size() - 1);
      if (second >= s.source) ++second;
    }
    s.second_source = second;
    s.dialogue = concat_dialogues(maybe_truncate(a), corpus[second]);
  } else {
    s.branch = AugmentBranch::kRaw;
    s.dialogue = a;
  }
  return s;
}

}  // namespace dialflow
