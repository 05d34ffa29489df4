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

#include "dialflow/model/train.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "dialflow/core/rng.h"

namespace dialflow {

namespace {

double grad_norm(const ModelParams& g) {
  double s = 0.0;
  for (const auto& t : g.tensors()) s += t.tensor->squaredNorm();
  return std::sqrt(s);
}

void scale(ModelParams& g, double f) {
  for (auto& t : g.tensors()) *t.tensor *= f;
}

void check_options(const TrainOptions& o) {
  if (o.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (!(o.lr >= 0.0) || !std::isfinite(o.lr)) throw std::invalid_argument("train: lr must be >= 0");
  if (!(o.beta1 >= 0.0 && o.beta1 < 1.0) || !(o.beta2 >= 0.0 && o.beta2 < 1.0)) {
    throw std::invalid_argument("train: betas must lie in [0, 1)");
  }
  if (!(o.adam_eps > 0.0)) throw std::invalid_argument("train: adam_eps must be > 0");
  if (o.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  o.augment.validate();
}

size_t encoded_grounded_len(const Vocabulary& vocab, const Dialogue& d, size_t turns) {
  const auto context = std::span(d.turns).first(turns - 1);
  return encode_grounded_prompt(vocab, d.facts, context).size() +
         tokenize(d.turns[turns - 1].text, vocab).size() + 1;
}

}  // namespace

DivergenceError::DivergenceError(int epoch_, size_t step_, const std::string& what)
    : std::runtime_error("training diverged at epoch " + std::to_string(epoch_) + ", step " +
                         std::to_string(step_) + ": " + what),
      epoch(epoch_),
      step(step_) {}

AdamOptimizer::AdamOptimizer(const ModelParams& like, double lr, double beta1, double beta2,
                             double eps)
    : m_(like), v_(like), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.set_zero();
  v_.set_zero();
}

void AdamOptimizer::step(ModelParams& params, const ModelParams& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto p = params.tensors();
  auto g = grad.tensors();
  auto m = m_.tensors();
  auto v = v_.tensors();
  for (size_t i = 0; i < p.size(); ++i) {
    auto gi = g[i].tensor->array();
    m[i].tensor->array() = beta1_ * m[i].tensor->array() + (1.0 - beta1_) * gi;
    v[i].tensor->array() = beta2_ * v[i].tensor->array() + (1.0 - beta2_) * gi.square();
    p[i].tensor->array() -=
        lr_ * (m[i].tensor->array() / c1) / ((v[i].tensor->array() / c2).sqrt() + eps_);
  }
}

std::optional<Dialogue> fit_for_training(const ModelConfig& cfg, const Vocabulary& vocab,
                                         const Dialogue& d, bool grounded) {
  size_t keep = std::min(d.turns.size(), static_cast<size_t>(cfg.max_utterances) + 1);
  const auto max_seq = static_cast<size_t>(cfg.max_seq);
  for (; keep >= 2; --keep) {
    for (size_t i = 0; i < keep; ++i) {
      if (tokenize(d.turns[i].text, vocab).empty()) return std::nullopt;
    }
    const auto head = std::span(d.turns).first(keep);
    if (encode_turns(vocab, head, true).tokens.size() > max_seq) continue;
    if (grounded && encoded_grounded_len(vocab, d, keep) > max_seq) continue;
    if (keep == d.turns.size()) return d;
    return truncate_at(d, keep);
  }
  return std::nullopt;
}

TrainResult train(std::span<const Dialogue> corpus, ModelConfig cfg, const TrainOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
  Vocabulary vocab = build_vocab(corpus, options.vocab_cap);
  cfg.vocab_size = static_cast<int>(vocab.size());
  cfg.seed = options.seed;
  cfg.validate();
  ModelParams params = ModelParams::initialize(cfg);
  return train(corpus, PlanningModel(cfg, std::move(vocab), std::move(params)), options);
}

TrainResult train(std::span<const Dialogue> corpus, PlanningModel model,
                  const TrainOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
  check_options(options);
  const ModelConfig& cfg = model.config();
  Rng rng(mix_seed(options.seed, 0x7a11));
  AdamOptimizer adam(model.params(), options.lr, options.beta1, options.beta2, options.adam_eps);
  ModelParams grad = ModelParams::zeros(cfg);
  std::vector<EpochStats> history;

  ObjectiveOptions oo;
  oo.include_grounded = options.grounded_objective;
  size_t step = 0;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochStats st;
    st.epoch = epoch;
    size_t in_batch = 0;
    auto flush = [&] {
      if (in_batch == 0) return;
      scale(grad, 1.0 / static_cast<double>(in_batch));
      const double norm = grad_norm(grad);
      if (!std::isfinite(norm)) throw DivergenceError(epoch, step, "non-finite gradient");
      if (options.clip_norm > 0.0 && norm > options.clip_norm) scale(grad, options.clip_norm / norm);
      adam.step(model.mutable_params(), grad);
      if (!model.params().all_finite()) throw DivergenceError(epoch, step, "non-finite parameters");
      grad.set_zero();
      in_batch = 0;
      ++step;
    };
    for (size_t i = 0; i < corpus.size(); ++i) {
      const AugmentSample s = sample_training_dialogue(corpus, options.augment, rng);
      const auto d = fit_for_training(cfg, model.vocab(), s.dialogue, options.grounded_objective);
      if (!d) continue;
      const ObjectiveResult r = model.objective(*d, oo, &grad);
      if (!std::isfinite(r.value())) throw DivergenceError(epoch, step, "non-finite loss");
      st.mean.flow += r.sum.flow;
      st.mean.gen += r.sum.gen;
      st.mean.bow += r.sum.bow;
      st.mean.total += r.sum.total;
      st.kg += r.grounded;
      st.targets += r.per_target.size();
      ++st.dialogues;
      if (++in_batch == options.batch_size) flush();
    }
    flush();
    if (st.dialogues == 0) throw std::invalid_argument("train: no dialogue fits the model limits");
    const auto nt = static_cast<double>(st.targets);
    st.mean.flow /= nt;
    st.mean.gen /= nt;
    st.mean.bow /= nt;
    st.mean.total = st.mean.flow + st.mean.gen + st.mean.bow;
    st.kg /= static_cast<double>(st.dialogues);
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    history.push_back(st);
    if (options.on_epoch) options.on_epoch(st);
  }
  return {std::move(model), std::move(history)};
}

bool is_content_word(std::string_view word) {
  static const std::set<std::string, std::less<>> kFunction = {
      "a",    "an",   "the",  "i",   "we",   "you",  "he",   "she",  "it",   "they", "me",
      "my",   "our",  "your", "is",  "are",  "was",  "were", "be",   "to",   "of",   "and",
      "or",   "but",  "in",   "on",  "at",   "for",  "with", "that", "this", "so",   "do",
      "did",  "not",  "as",   "by",  "from", "very", "too",  "what", "how",  "am",   "have"};
  return !word.empty() && !is_punctuation(word) && !kFunction.contains(word);
}

BowRecall bow_recall(const PlanningModel& model, std::span<const Dialogue> dialogues, size_t k) {
  const auto& vocab = model.vocab();
  const size_t words = vocab.size() - special::kCount;
  if (k == 0 || k > words) throw std::invalid_argument("bow_recall: k outside [1, vocabulary words]");
  BowRecall out;
  out.chance = static_cast<double>(k) / static_cast<double>(words);
  const auto& p = model.params();
  double sum = 0.0;
  for (const auto& raw : dialogues) {
    const auto d = fit_for_training(model.config(), vocab, raw, false);
    if (!d) continue;
    const auto reprs = model.prefix_reprs(d->turns);
    for (size_t n = 2; n <= d->turns.size(); ++n) {
      std::set<TokenId> want;
      for (const auto& w : split_words(d->turns[n - 1].text)) {
        if (is_content_word(w) && vocab.contains(w)) want.insert(vocab.id(w));
      }
      if (want.empty()) continue;
      const PlanResult plan = model.plan_next(std::span(reprs).first(n - 1));
      const RowVec logits = plan.delta.transpose() * p.bow_w + p.bow_b;
      std::vector<TokenId> ids(words);
      std::iota(ids.begin(), ids.end(), static_cast<TokenId>(special::kCount));
      std::partial_sort(ids.begin(), ids.begin() + static_cast<long>(k), ids.end(), [&](TokenId a, TokenId b) {
        return logits[a] > logits[b] || (logits[a] == logits[b] && a < b);
      });
      size_t hit = 0;
      for (size_t i = 0; i < k; ++i) hit += want.count(ids[i]);
      sum += static_cast<double>(hit) / static_cast<double>(want.size());
      ++out.targets;
    }
  }
  if (out.targets > 0) out.recall = sum / static_cast<double>(out.targets);
  return out;
}

}  // namespace dialflow
