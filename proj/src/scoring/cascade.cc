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

#include "dialflow/scoring/cascade.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dialflow {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::kAbusive: return "abusive";
    case Stage::kCoherence: return "coherence";
    case Stage::kConflict: return "conflict";
    case Stage::kRank: return "rank";
  }
  return "?";
}

void CascadeConfig::validate() const {
  if (k < 1) throw std::invalid_argument("cascade: k must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("cascade: alpha outside [0, 1]");
  if (rank.distinct < 0 || rank.length < 0 || rank.novelty < 0 ||
      std::abs(rank.distinct + rank.length + rank.novelty - 1.0) > 1e-9) {
    throw std::invalid_argument("cascade: rank weights must be non-negative and sum to 1");
  }
  if (!(rank.length_sigma > 0.0)) throw std::invalid_argument("cascade: length sigma must be > 0");
  if (fallbacks.empty()) throw std::invalid_argument("cascade: at least one fallback is required");
  for (const auto& f : fallbacks) {
    if (split_words(f).empty()) throw std::invalid_argument("cascade: blank fallback");
  }
}

nlohmann::json Trace::to_json() const {
  nlohmann::json j;
  j["candidates"] = nlohmann::json::array();
  for (size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    nlohmann::json jc = {{"index", c.index},   {"text", c.text},       {"scores", c.scores},
                         {"abusive", c.abusive}, {"conflict", c.conflict}};
    if (!c.conflict_reason.empty()) jc["conflict_reason"] = c.conflict_reason;
    jc["dropped_at"] = c.dropped_at ? nlohmann::json(stage_name(*c.dropped_at)) : nlohmann::json();
    if (i < seeds.size()) jc["seed"] = seeds[i];
    if (i < planned.size()) jc["planned"] = static_cast<bool>(planned[i]);
    j["candidates"].push_back(std::move(jc));
  }
  j["selected_index"] = selected_index ? nlohmann::json(*selected_index) : nlohmann::json();
  j["fallback"] = fallback;
  j["response"] = response;
  j["counts"] = {{"input", candidates.size()},
                 {"dropped_abusive", dropped_abusive},
                 {"dropped_coherence", dropped_coherence},
                 {"dropped_conflict", dropped_conflict},
                 {"dropped_rank", dropped_rank},
                 {"selected", selected_index ? 1 : 0}};
  return j;
}

Scorers default_scorers(const PlanningModel& model, const EmbeddingTable& table,
                        const NliRules& rules, const AbusiveLexicon& lexicon,
                        const CascadeConfig& cfg) {
  Scorers s;
  const double alpha = cfg.alpha;
  const RankWeights rw = cfg.rank;
  s.coherence = [&model, &table, alpha](std::span<const Utterance> ctx, const std::string& c) {
    return coherence_score(ctx, c, model, table, alpha);
  };
  s.rank = [rw](std::span<const Utterance> ctx, const std::string& c) { return rank_score(ctx, c, rw); };
  s.conflict = [&rules](std::span<const Utterance> ctx, const std::string& c) {
    return detect_conflict(ctx, c, rules);
  };
  s.lexicon = &lexicon;
  return s;
}

std::vector<std::string> vet_fallbacks(std::span<const std::string> fallbacks,
                                       const AbusiveLexicon& lexicon) {
  std::vector<std::string> out;
  for (const auto& f : fallbacks) {
    if (!split_words(f).empty() && !lexicon.flags(f)) out.push_back(f);
  }
  if (out.empty()) throw std::invalid_argument("cascade: every fallback response is abusive or blank");
  return out;
}

Trace select_response(std::span<const Utterance> context, std::span<const std::string> candidates,
                      const CascadeConfig& cfg, const Scorers& scorers) {
  if (candidates.empty()) throw std::invalid_argument("select_response: no candidates");
  cfg.validate();
  Trace tr;
  for (size_t i = 0; i < candidates.size(); ++i) {
    ScoredCandidate c;
    c.index = i;
    c.text = candidates[i];
    c.tokens = split_words(c.text);
    if (c.tokens.empty()) throw std::invalid_argument("select_response: empty candidate " + std::to_string(i));
    c.abusive = scorers.lexicon && scorers.lexicon->flags(c.text);
    const ConflictResult cr = scorers.conflict(context, c.text);
    c.conflict = cr.conflict;
    c.conflict_reason = cr.explanation;
    c.scores["rank"] = scorers.rank(context, c.text);
    tr.candidates.push_back(std::move(c));
  }

  // 1: abusive
  std::vector<size_t> alive;
  for (auto& c : tr.candidates) {
    if (c.abusive) {
      c.dropped_at = Stage::kAbusive;
      ++tr.dropped_abusive;
    } else {
      c.scores["coherence"] = scorers.coherence(context, c.text);
      alive.push_back(c.index);
    }
  }
  // 2: top-k coherence, ties by index
  std::stable_sort(alive.begin(), alive.end(), [&](size_t a, size_t b) {
    return tr.candidates[a].scores["coherence"] > tr.candidates[b].scores["coherence"];
  });
  for (size_t r = cfg.k; r < alive.size(); ++r) {
    tr.candidates[alive[r]].dropped_at = Stage::kCoherence;
    ++tr.dropped_coherence;
  }
  if (alive.size() > cfg.k) alive.resize(cfg.k);
  std::sort(alive.begin(), alive.end());
  // 3: conflicts
  std::vector<size_t> clean;
  for (size_t i : alive) {
    if (tr.candidates[i].conflict) {
      tr.candidates[i].dropped_at = Stage::kConflict;
      ++tr.dropped_conflict;
    } else {
      clean.push_back(i);
    }
  }
  // 4: rank
  if (!clean.empty()) {
    size_t best = clean.front();
    for (size_t i : clean) {
      if (tr.candidates[i].scores["rank"] > tr.candidates[best].scores["rank"]) best = i;
    }
    for (size_t i : clean) {
      if (i != best) {
        tr.candidates[i].dropped_at = Stage::kRank;
        ++tr.dropped_rank;
      }
    }
    tr.selected_index = best;
    tr.response = tr.candidates[best].text;
    return tr;
  }
  tr.fallback = true;
  const auto vetted = scorers.lexicon ? vet_fallbacks(cfg.fallbacks, *scorers.lexicon)
                                      : std::vector<std::string>(cfg.fallbacks);
  tr.response = vetted.front();
  for (const auto& f : vetted) {
    if (!scorers.conflict(context, f).conflict) {
      tr.response = f;
      break;
    }
  }
  return tr;
}

}  // namespace dialflow
