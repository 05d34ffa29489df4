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

#include "dialflow/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace dialflow {

namespace {

void require_non_empty(WordSpan hyp, WordSpan ref, const char* name) {
  if (hyp.empty() || ref.empty()) {
    throw std::invalid_argument(std::string(name) + ": empty input");
  }
}

std::map<std::vector<std::string>, size_t> ngram_counts(WordSpan words, size_t n) {
  std::map<std::vector<std::string>, size_t> counts;
  for (size_t i = 0; i + n <= words.size(); ++i) {
    ++counts[std::vector<std::string>(words.begin() + i, words.begin() + i + n)];
  }
  return counts;
}

// Branch-and-bound over hyp positions, left to right. Each word must be
// matched exactly min(count_hyp, count_ref) times, which fixes the match
// count at its maximum; the search minimizes chunks among those alignments.
class AlignmentSearch {
 public:
  AlignmentSearch(WordSpan hyp, WordSpan ref) : ref_used_(ref.size(), false) {
    std::unordered_map<std::string, int> ids;
    auto intern = [&](const std::string& w) {
      return ids.emplace(w, static_cast<int>(ids.size())).first->second;
    };
    for (const auto& w : hyp) hyp_.push_back(intern(w));
    for (const auto& w : ref) ref_.push_back(intern(w));
    need_.assign(ids.size(), 0);
    std::vector<int> hyp_count(ids.size(), 0), ref_count(ids.size(), 0);
    for (int w : hyp_) ++hyp_count[w];
    for (int w : ref_) ++ref_count[w];
    for (size_t w = 0; w < ids.size(); ++w) {
      need_[w] = std::min(hyp_count[w], ref_count[w]);
      matches_ += static_cast<size_t>(need_[w]);
    }
    // remaining_[i] = occurrences of hyp_[i] strictly after position i.
    remaining_.assign(hyp_.size(), 0);
    std::vector<int> seen(ids.size(), 0);
    for (size_t i = hyp_.size(); i-- > 0;) {
      remaining_[i] = seen[hyp_[i]];
      ++seen[hyp_[i]];
    }
    for (size_t j = 0; j < ref_.size(); ++j) positions_[ref_[j]].push_back(j);
    current_.assign(hyp_.size(), std::nullopt);
  }

  MeteorAlignment run() {
    MeteorAlignment out;
    out.matches = matches_;
    if (matches_ == 0) {
      out.hyp_to_ref.assign(hyp_.size(), std::nullopt);
      return out;
    }
    pending_ = matches_;
    search(0, std::nullopt, 0);
    out.chunks = best_chunks_;
    out.hyp_to_ref = best_;
    out.exhaustive = nodes_ <= kNodeBudget;
    return out;
  }

 private:
  static constexpr size_t kNodeBudget = 100'000;

  void search(size_t i, std::optional<size_t> prev, size_t chunks) {
    // a pending match with no open chunk costs at least one more
    const size_t floor = chunks + (pending_ > 0 && !prev ? 1 : 0);
    if (best_chunks_ != 0 && floor >= best_chunks_) return;
    if (best_chunks_ == 1 || (nodes_ > kNodeBudget && best_chunks_ != 0)) return;
    ++nodes_;
    if (i == hyp_.size()) {
      best_chunks_ = chunks;
      best_ = current_;
      return;
    }
    const int w = hyp_[i];
    if (need_[w] > 0) {
      auto take = [&](size_t j) {
        ref_used_[j] = true;
        --need_[w];
        --pending_;
        current_[i] = j;
        const bool continues = prev.has_value() && *prev + 1 == j;
        search(i + 1, j, chunks + (continues ? 0 : 1));
        current_[i].reset();
        ++pending_;
        ++need_[w];
        ref_used_[j] = false;
      };
      const auto& pos = positions_[w];
      std::optional<size_t> next;
      if (prev && *prev + 1 < ref_.size() && ref_[*prev + 1] == w && !ref_used_[*prev + 1]) {
        next = *prev + 1;
        take(*next);
      }
      for (size_t j : pos) {
        if (!ref_used_[j] && j != next) take(j);
      }
    }
    if (remaining_[i] >= need_[w]) search(i + 1, std::nullopt, chunks);
  }

  std::vector<int> hyp_, ref_;
  std::vector<int> need_;
  std::vector<int> remaining_;
  std::unordered_map<int, std::vector<size_t>> positions_;
  std::vector<bool> ref_used_;
  std::vector<std::optional<size_t>> current_;
  std::vector<std::optional<size_t>> best_;
  size_t matches_ = 0;
  size_t pending_ = 0;
  size_t best_chunks_ = 0;  // 0 = no complete alignment yet
  size_t nodes_ = 0;
};

}  // namespace

double bleu(WordSpan hyp, WordSpan ref) {
  require_non_empty(hyp, ref, "bleu");
  const size_t max_n = std::min({size_t{4}, hyp.size(), ref.size()});
  double log_sum = 0.0;
  for (size_t n = 1; n <= max_n; ++n) {
    const auto hyp_counts = ngram_counts(hyp, n);
    const auto ref_counts = ngram_counts(ref, n);
    size_t clipped = 0;
    for (const auto& [gram, c] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) clipped += std::min(c, it->second);
    }
    if (clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(hyp.size() - n + 1));
  }
  const double bp = std::exp(
      std::min(0.0, 1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size())));
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

void MeteorParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("meteor: alpha outside [0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("meteor: gamma outside [0,1]");
  if (!(beta > 0.0)) throw std::invalid_argument("meteor: beta must be positive");
}

MeteorAlignment meteor_align(WordSpan hyp, WordSpan ref) {
  return AlignmentSearch(hyp, ref).run();
}

double meteor_lite(WordSpan hyp, WordSpan ref, const MeteorParams& params) {
  require_non_empty(hyp, ref, "meteor_lite");
  params.validate();
  const MeteorAlignment a = meteor_align(hyp, ref);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double precision = m / static_cast<double>(hyp.size());
  const double recall = m / static_cast<double>(ref.size());
  const double fmean =
      precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);
  const double penalty =
      params.gamma * std::pow(static_cast<double>(a.chunks) / m, params.beta);
  return fmean * (1.0 - penalty);
}

double greedy_embed_score(WordSpan hyp, WordSpan ref, const EmbeddingTable& table) {
  require_non_empty(hyp, ref, "greedy_embed_score");
  std::vector<Eigen::VectorXd> hv, rv;
  for (const auto& w : hyp) hv.push_back(table.vector(w));
  for (const auto& w : ref) rv.push_back(table.vector(w));
  Eigen::MatrixXd sim(static_cast<Eigen::Index>(hyp.size()),
                      static_cast<Eigen::Index>(ref.size()));
  for (size_t i = 0; i < hyp.size(); ++i) {
    for (size_t j = 0; j < ref.size(); ++j) {
      // Identical words compare as exactly 1 regardless of rounding.
      const double s = hyp[i] == ref[j] ? 1.0 : cosine(hv[i], rv[j]);
      sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::max(0.0, s);
    }
  }
  const double precision = sim.rowwise().maxCoeff().mean();
  const double recall = sim.colwise().maxCoeff().mean();
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Metric metric_by_name(std::string_view name, const EmbeddingTable* table) {
  if (name == "meteor") {
    return [](WordSpan h, WordSpan r) { return meteor_lite(h, r); };
  }
  if (name == "bleu") return [](WordSpan h, WordSpan r) { return bleu(h, r); };
  if (name == "embed") {
    if (table == nullptr) throw std::invalid_argument("metric 'embed' needs an embedding table");
    return [table](WordSpan h, WordSpan r) { return greedy_embed_score(h, r, *table); };
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) +
                              "' (expected meteor, bleu or embed)");
}

}  // namespace dialflow
