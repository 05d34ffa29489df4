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

#ifndef DIALFLOW_MODEL_PLANNING_MODEL_H_
#define DIALFLOW_MODEL_PLANNING_MODEL_H_

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "dialflow/core/dialogue.h"
#include "dialflow/core/text.h"
#include "dialflow/model/config.h"
#include "dialflow/model/params.h"

namespace dialflow {

// Representation of the prefix u_1..u_n: top-layer hidden state at the last
// token of u_n.
struct UtteranceRepr {
  size_t n = 0;
  Eigen::VectorXd vector;
};

struct PlanResult {
  UtteranceRepr predicted;  // U'_{1..n}
  Eigen::VectorXd delta;    // U'_{1..n} - U_{1..n-1}
};

struct LossBreakdown {
  double flow = 0.0;
  double gen = 0.0;
  double bow = 0.0;
  double total = 0.0;
};

// Token layout of a dialogue: per turn "[SPK] w1 .. wk [SEP]".
struct EncodedTurn {
  size_t speaker_pos;
  size_t first_word;
  size_t last_word;
};

struct EncodedDialogue {
  std::vector<TokenId> tokens;
  std::vector<EncodedTurn> turns;
};

// With trailing_sep=false the final turn has no closing separator.
EncodedDialogue encode_turns(const Vocabulary& vocab, std::span<const Utterance> turns,
                             bool trailing_sep = true);

// "[FACT] f1 [FACT] f2 .. [SEP]" (omitted without facts), then the context
// turns, then "[BOS]". The response follows, closed by [EOS].
std::vector<TokenId> encode_grounded_prompt(const Vocabulary& vocab,
                                            std::span<const std::string> facts,
                                            std::span<const Utterance> context);

struct ObjectiveOptions {
  // Loss terms are summed over target utterances n in [first_target, N].
  size_t first_target = 2;
  // Adds the grounded language-model loss with the last turn as response.
  bool include_grounded = false;
  // Replaces the encoder's prefix representations (N x d). Representations
  // are constants of the objective either way; this lets a finite-difference
  // check hold them fixed under parameter perturbation.
  const Mat* frozen_reprs = nullptr;
};

struct ObjectiveResult {
  LossBreakdown sum;
  std::vector<LossBreakdown> per_target;
  double grounded = 0.0;
  size_t gen_tokens = 0;
  size_t bow_tokens = 0;
  size_t grounded_tokens = 0;
  Mat reprs;  // prefix representations used (N x d)

  double value() const { return sum.total + grounded; }
};

// The dialogue planning model: causal transformer LM, a flow block over
// prefix representations, the fusion layer that conditions generation on
// the planned delta, and the bag-of-words head.
class PlanningModel {
 public:
  PlanningModel(ModelConfig config, Vocabulary vocab, ModelParams params);

  const ModelConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  const ModelParams& params() const { return params_; }
  ModelParams& mutable_params() { return params_; }

  // Errors: n outside [1, |turns|], encoded prefix longer than max_seq.
  UtteranceRepr encode_prefix(const Dialogue& d, size_t n) const;

  // U_1 .. U_{|turns|} from a single causal pass.
  std::vector<UtteranceRepr> prefix_reprs(std::span<const Utterance> turns) const;

  // Errors: empty input, more than max_utterances prefixes.
  PlanResult plan_next(std::span<const UtteranceRepr> prefixes) const;

  // Plans the turn that follows `history`.
  PlanResult plan_from_history(std::span<const Utterance> history) const;

  // Loss terms for predicting u_{target_n} (1-based). Errors: target_n < 2
  // or beyond the dialogue.
  LossBreakdown compute_losses(const Dialogue& d, size_t target_n) const;

  // Negative log-likelihood of the response tokens and closing [EOS] given
  // facts and context. Errors: empty response, sequence over max_seq.
  double kg_lm_loss(std::span<const std::string> facts, std::span<const Utterance> context,
                    const Utterance& response) const;

  // Training objective; gradients are accumulated into *grad when given.
  ObjectiveResult objective(const Dialogue& d, const ObjectiveOptions& options,
                            ModelParams* grad) const;

  // Next-token logits after `tokens`, fused with `delta` (zero when null).
  RowVec next_logits(std::span<const TokenId> tokens, const Eigen::VectorXd* delta) const;

  // Logits at every position with a zero delta. T x vocab.
  Mat sequence_logits(std::span<const TokenId> tokens) const;

  // Log-probabilities of each response token and the closing separator when
  // the response is spoken after `history`.
  std::vector<double> response_log_probs(std::span<const Utterance> history,
                                         std::span<const TokenId> response) const;

 private:
  ModelConfig config_;
  Vocabulary vocab_;
  ModelParams params_;
};

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_PLANNING_MODEL_H_
