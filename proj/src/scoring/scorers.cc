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

#include "dialflow/scoring/scorers.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dialflow/model/generate.h"

namespace dialflow {

namespace {

using Gram = std::vector<std::string>;

std::set<Gram> ngrams(const Words& w, size_t n) {
  std::set<Gram> out;
  for (size_t i = 0; i + n <= w.size(); ++i) out.emplace(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i + n));
  return out;
}

}  // namespace

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double mean_log_prob(const PlanningModel& model, std::span<const Utterance> context,
                     std::string_view candidate) {
  const auto tokens = tokenize(candidate, model.vocab());
  if (tokens.empty()) throw std::invalid_argument("mean_log_prob: empty candidate");
  const auto history = fit_history(model, context, static_cast<int>(tokens.size()) + 1);
  const auto lp = model.response_log_probs(history, tokens);
  double s = 0.0;
  for (double v : lp) s += v;
  return s / static_cast<double>(lp.size());
}

double embedding_similarity(const EmbeddingTable& table, const Words& a, const Words& b) {
  if (a.empty() || b.empty()) return 0.0;
  if (a == b) return 1.0;
  Eigen::VectorXd va = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.dim()));
  Eigen::VectorXd vb = va;
  for (const auto& w : a) va += table.vector(w);
  for (const auto& w : b) vb += table.vector(w);
  va /= static_cast<double>(a.size());
  vb /= static_cast<double>(b.size());
  return std::clamp(cosine(va, vb), 0.0, 1.0);
}

double coherence_score(std::span<const Utterance> context, std::string_view candidate,
                       const PlanningModel& model, const EmbeddingTable& table, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("coherence_score: alpha outside [0, 1]");
  const Words cand = split_words(candidate);
  if (cand.empty()) throw std::invalid_argument("coherence_score: empty candidate");
  const double lm = logistic(mean_log_prob(model, context, candidate));
  const double emb =
      context.empty() ? 0.0 : embedding_similarity(table, cand, split_words(context.back().text));
  return alpha * lm + (1.0 - alpha) * emb;
}

double distinct_bigram_ratio(const Words& w) {
  if (w.size() < 2) return 0.0;
  return static_cast<double>(ngrams(w, 2).size()) / static_cast<double>(w.size() - 1);
}

double max_trigram_overlap(std::span<const Utterance> context, const Words& w) {
  if (w.size() < 3) return 0.0;
  const auto mine = ngrams(w, 3);
  double best = 0.0;
  for (const auto& u : context) {
    const auto theirs = ngrams(split_words(u.text), 3);
    size_t hit = 0;
    for (const auto& g : mine) hit += theirs.count(g);
    best = std::max(best, static_cast<double>(hit) / static_cast<double>(mine.size()));
  }
  return best;
}

double rank_score(std::span<const Utterance> context, std::string_view candidate,
                  const RankWeights& weights) {
  const Words w = split_words(candidate);
  if (w.empty()) throw std::invalid_argument("rank_score: empty candidate");
  const double dl = static_cast<double>(w.size()) - weights.target_len;
  const double len_term = std::exp(-dl * dl / (2.0 * weights.length_sigma * weights.length_sigma));
  return weights.distinct * distinct_bigram_ratio(w) + weights.length * len_term +
         weights.novelty * (1.0 - max_trigram_overlap(context, w));
}

}  // namespace dialflow
