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

#include "dialflow/ensemble/ensemble.h"

#include <stdexcept>
#include <unordered_set>

namespace dialflow {

EnsembleResult ensemble_select(std::span<const Words> candidates, const Metric& metric) {
  if (candidates.empty()) throw std::invalid_argument("ensemble_select: no candidates");
  const size_t n = candidates.size();
  EnsembleResult r;
  r.scores.assign(n, 0.0);
  if (n == 1) return r;
  for (size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (j != i) s += metric(candidates[i], candidates[j]);
    }
    r.scores[i] = s / static_cast<double>(n - 1);
  }
  for (size_t i = 1; i < n; ++i) {
    if (r.scores[i] > r.scores[r.selected_index]) r.selected_index = i;
  }
  return r;
}

GroundedResponse grounded_respond(const Dialogue& context, const PlanningModel* model,
                                  const Metric& metric, const GroundedOptions& options) {
  if (!model) throw std::invalid_argument("grounded_respond: no model loaded");
  if (options.k == 0) throw std::invalid_argument("grounded_respond: k must be >= 1");

  // Oldest turns go first when the prompt would not leave room to answer.
  std::span<const Utterance> turns(context.turns);
  const auto max_seq = static_cast<size_t>(model->config().max_seq);
  while (!turns.empty() &&
         encode_grounded_prompt(model->vocab(), context.facts, turns).size() +
                 static_cast<size_t>(options.max_len) >
             max_seq) {
    turns = turns.subspan(1);
  }
  if (turns.size() > static_cast<size_t>(model->config().max_utterances)) {
    turns = turns.last(static_cast<size_t>(model->config().max_utterances));
  }
  if (encode_grounded_prompt(model->vocab(), context.facts, turns).size() >= max_seq) {
    throw std::invalid_argument("grounded_respond: facts alone exceed the model's sequence limit");
  }

  GenerateOptions go;
  go.top_p = options.top_p;
  go.max_len = options.max_len;
  GroundedResponse out;
  std::unordered_set<std::string> seen;
  std::vector<Words> words;
  for (size_t i = 0; i < options.k; ++i) {
    const uint64_t seed = mix_seed(options.seed, i);
    Rng rng(seed);
    Candidate c = generate_grounded(*model, context.facts, turns, go, rng);
    c.seed = seed;
    if (!options.dedup || seen.insert(c.text).second) {
      out.candidates.push_back(c.text);
      words.push_back(split_words(c.text));
    }
    out.samples.push_back(std::move(c));
  }
  out.ensemble = ensemble_select(words, metric);
  out.response = out.candidates[out.ensemble.selected_index];
  return out;
}

}  // namespace dialflow
