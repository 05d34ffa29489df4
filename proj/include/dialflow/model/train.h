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

#ifndef DIALFLOW_MODEL_TRAIN_H_
#define DIALFLOW_MODEL_TRAIN_H_

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialflow/augment/augment.h"
#include "dialflow/core/dialogue.h"
#include "dialflow/model/planning_model.h"

namespace dialflow {

struct EpochStats {
  int epoch = 0;
  // Means over every (dialogue, target utterance) pair seen in the epoch.
  LossBreakdown mean;
  // Mean grounded-LM loss per dialogue (0 when disabled).
  double kg = 0.0;
  size_t dialogues = 0;
  size_t targets = 0;
  double seconds = 0.0;
};

struct TrainOptions {
  int epochs = 20;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  size_t batch_size = 8;
  double clip_norm = 5.0;  // <= 0 disables
  uint64_t seed = 1;
  // Also trains the grounded layout so grounded generation works.
  bool grounded_objective = true;
  AugmentConfig augment;
  size_t vocab_cap = 4096;
  std::function<void(const EpochStats&)> on_epoch;
};

struct TrainResult {
  PlanningModel model;
  std::vector<EpochStats> history;
};

// Raised when a loss or gradient becomes non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, size_t step, const std::string& what);
  int epoch;
  size_t step;
};

class AdamOptimizer {
 public:
  AdamOptimizer(const ModelParams& like, double lr, double beta1, double beta2, double eps);
  void step(ModelParams& params, const ModelParams& grad);
  long steps() const { return t_; }

 private:
  ModelParams m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

// Longest prefix of d (at least two turns) that fits the model's sequence
// and utterance limits; nullopt when no such prefix exists.
std::optional<Dialogue> fit_for_training(const ModelConfig& cfg, const Vocabulary& vocab,
                                         const Dialogue& d, bool grounded);

// Each epoch draws |corpus| dialogues through sample_training_dialogue.
// cfg.vocab_size is overwritten with the size of the built vocabulary.
// Errors: empty corpus, invalid options, divergence.
TrainResult train(std::span<const Dialogue> corpus, ModelConfig cfg, const TrainOptions& options);

// Same, continuing from an existing model.
TrainResult train(std::span<const Dialogue> corpus, PlanningModel model,
                  const TrainOptions& options);

// Function words and punctuation are not content words.
bool is_content_word(std::string_view word);

struct BowRecall {
  double recall = 0.0;  // mean over targets with at least one content word
  double chance = 0.0;  // k / number of non-special vocabulary entries
  size_t targets = 0;
};

// For every u_n (n >= 2) of every dialogue: the fraction of u_n's distinct
// in-vocabulary content words found among the k most likely non-special
// tokens of the bag-of-words head planned from u_1..u_{n-1}.
BowRecall bow_recall(const PlanningModel& model, std::span<const Dialogue> dialogues, size_t k);

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_TRAIN_H_
