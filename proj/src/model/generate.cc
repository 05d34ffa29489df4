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

#include "dialflow/model/generate.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dialflow {

namespace {

Candidate sample_loop(const PlanningModel& model, std::vector<TokenId> prompt, TokenId stop,
                      const Eigen::VectorXd* delta, const GenerateOptions& options, Rng& rng) {
  if (options.max_len < 1) throw std::invalid_argument("generate: max_len must be >= 1");
  Candidate out;
  for (size_t step = 0; step < static_cast<size_t>(options.max_len); ++step) {
    if (prompt.size() >= static_cast<size_t>(model.config().max_seq)) break;
    const RowVec logits = model.next_logits(prompt, delta);
    StepRecord rec;
    rec.dist = step_distribution(logits, stop, step);
    rec.nucleus = nucleus(rec.dist, options.top_p);
    double mass = 0.0;
    for (TokenId t : rec.nucleus) mass += rec.dist[static_cast<size_t>(t)];
    const double u = rng.uniform() * mass;
    double acc = 0.0;
    rec.token = rec.nucleus.back();
    for (TokenId t : rec.nucleus) {
      acc += rec.dist[static_cast<size_t>(t)];
      if (u < acc) {
        rec.token = t;
        break;
      }
    }
    if (options.observer) options.observer(rec);
    if (rec.token == stop) break;
    out.tokens.push_back(rec.token);
    prompt.push_back(rec.token);
  }
  const Words words = model.vocab().decode(out.tokens);
  out.text = detokenize(words);
  return out;
}

}  // namespace

std::vector<TokenId> nucleus(std::span<const double> dist, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("nucleus: p must be in (0, 1]");
  if (dist.empty()) throw std::invalid_argument("nucleus: empty distribution");
  double sum = 0.0;
  for (double v : dist) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("nucleus: probabilities must be finite and non-negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("nucleus: distribution does not sum to 1");

  std::vector<TokenId> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    return dist[static_cast<size_t>(a)] > dist[static_cast<size_t>(b)];
  });
  std::vector<TokenId> out;
  double cum = 0.0;
  for (TokenId t : order) {
    const double v = dist[static_cast<size_t>(t)];
    if (v == 0.0) break;
    out.push_back(t);
    cum += v;
    if (p < 1.0 && cum >= p) break;
  }
  return out;
}

std::vector<double> step_distribution(const RowVec& logits, TokenId stop, size_t step) {
  const auto v = static_cast<size_t>(logits.size());
  std::vector<bool> allowed(v, false);
  for (size_t t = special::kCount; t < v; ++t) allowed[t] = true;
  if (step > 0) allowed[static_cast<size_t>(stop)] = true;
  double mx = -INFINITY;
  for (size_t t = 0; t < v; ++t) {
    if (allowed[t]) mx = std::max(mx, logits[static_cast<Eigen::Index>(t)]);
  }
  std::vector<double> dist(v, 0.0);
  double sum = 0.0;
  for (size_t t = 0; t < v; ++t) {
    if (!allowed[t]) continue;
    dist[t] = std::exp(logits[static_cast<Eigen::Index>(t)] - mx);
    sum += dist[t];
  }
  for (double& x : dist) x /= sum;
  return dist;
}

std::span<const Utterance> fit_history(const PlanningModel& model,
                                       std::span<const Utterance> history, int max_len) {
  const auto& cfg = model.config();
  size_t start = 0;
  if (history.size() > static_cast<size_t>(cfg.max_utterances)) {
    start = history.size() - static_cast<size_t>(cfg.max_utterances);
  }
  while (start < history.size()) {
    const auto tail = history.subspan(start);
    const size_t len = encode_turns(model.vocab(), tail, /*trailing_sep=*/true).tokens.size();
    if (len + 1 + static_cast<size_t>(max_len) <= static_cast<size_t>(cfg.max_seq)) break;
    ++start;
  }
  return history.subspan(start);
}

Candidate generate(const PlanningModel& model, std::span<const Utterance> history,
                   const PlanResult* plan, const GenerateOptions& options, Rng& rng) {
  auto prompt = encode_turns(model.vocab(), history, /*trailing_sep=*/true).tokens;
  const Speaker next = history.empty() ? Speaker::kA : other(history.back().speaker);
  prompt.push_back(speaker_token(next));
  Candidate c = sample_loop(model, std::move(prompt), special::kSep,
                            plan ? &plan->delta : nullptr, options, rng);
  c.planned = plan != nullptr;
  return c;
}

Candidate generate_grounded(const PlanningModel& model, std::span<const std::string> facts,
                            std::span<const Utterance> context, const GenerateOptions& options,
                            Rng& rng) {
  auto prompt = encode_grounded_prompt(model.vocab(), facts, context);
  return sample_loop(model, std::move(prompt), special::kEos, nullptr, options, rng);
}

}  // namespace dialflow
