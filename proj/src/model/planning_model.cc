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

#include "dialflow/model/planning_model.h"

#include <stdexcept>

#include "dialflow/model/layers.h"

namespace dialflow {

namespace {

// Negative log-likelihood of `targets` under the fused head applied to the
// hidden rows `h`, optionally conditioned on `delta`.
double fused_nll(const ModelParams& p, const Mat& h, const Eigen::VectorXd* delta,
                 std::span<const TokenId> targets, ModelParams* grad, Mat* dh,
                 Eigen::VectorXd* ddelta) {
  const Eigen::Index d = h.cols();
  const auto w_hidden = p.fuse_w.topRows(d);
  const auto w_delta = p.fuse_w.bottomRows(d);
  Mat z = h * w_hidden;
  if (delta) z.rowwise() += (delta->transpose() * w_delta);
  z.rowwise() += p.fuse_b.row(0);
  const Mat logits = z * p.tok_emb.transpose();
  double nll = 0.0;
  Mat dlogits;
  if (grad) dlogits.resize(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const RowVec lp = log_softmax(logits.row(r));
    const TokenId target = targets[static_cast<size_t>(r)];
    nll -= lp[target];
    if (grad) {
      dlogits.row(r) = lp.array().exp();
      dlogits(r, target) -= 1.0;
    }
  }
  if (grad) {
    grad->tok_emb.noalias() += dlogits.transpose() * z;
    const Mat dz = dlogits * p.tok_emb;
    const RowVec dz_sum = dz.colwise().sum();
    grad->fuse_b += dz_sum;
    grad->fuse_w.topRows(d).noalias() += h.transpose() * dz;
    if (delta) {
      grad->fuse_w.bottomRows(d).noalias() += (*delta) * dz_sum;
      if (ddelta) ddelta->noalias() += w_delta * dz_sum.transpose();
    }
    if (dh) dh->noalias() = dz * w_hidden.transpose();
  }
  return nll;
}

double bow_nll(const ModelParams& p, const Eigen::VectorXd& delta, std::span<const TokenId> targets,
               ModelParams* grad, Eigen::VectorXd* ddelta) {
  if (targets.empty()) return 0.0;
  const RowVec logits = delta.transpose() * p.bow_w + p.bow_b;
  const RowVec lp = log_softmax(logits);
  double nll = 0.0;
  for (TokenId t : targets) nll -= lp[t];
  if (grad) {
    RowVec g = lp.array().exp() * static_cast<double>(targets.size());
    for (TokenId t : targets) g[t] -= 1.0;
    grad->bow_w.noalias() += delta * g;
    grad->bow_b += g;
    if (ddelta) ddelta->noalias() += p.bow_w * g.transpose();
  }
  return nll;
}

std::vector<TokenId> turn_words(const Vocabulary& vocab, const Utterance& u) {
  auto ids = tokenize(u.text, vocab);
  if (ids.empty()) throw std::invalid_argument("utterance has no tokens");
  return ids;
}

Mat gather_rows(const Mat& m, size_t first, size_t last) {
  return m.middleRows(static_cast<Eigen::Index>(first),
                      static_cast<Eigen::Index>(last - first + 1));
}

}  // namespace

EncodedDialogue encode_turns(const Vocabulary& vocab, std::span<const Utterance> turns,
                             bool trailing_sep) {
  EncodedDialogue enc;
  for (size_t i = 0; i < turns.size(); ++i) {
    if (i > 0) enc.tokens.push_back(special::kSep);
    EncodedTurn t{};
    t.speaker_pos = enc.tokens.size();
    enc.tokens.push_back(speaker_token(turns[i].speaker));
    const auto words = turn_words(vocab, turns[i]);
    t.first_word = enc.tokens.size();
    enc.tokens.insert(enc.tokens.end(), words.begin(), words.end());
    t.last_word = enc.tokens.size() - 1;
    enc.turns.push_back(t);
  }
  if (trailing_sep && !turns.empty()) enc.tokens.push_back(special::kSep);
  return enc;
}

std::vector<TokenId> encode_grounded_prompt(const Vocabulary& vocab,
                                            std::span<const std::string> facts,
                                            std::span<const Utterance> context) {
  std::vector<TokenId> out;
  for (const auto& f : facts) {
    out.push_back(special::kFact);
    const auto ids = tokenize(f, vocab);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  if (!facts.empty()) out.push_back(special::kSep);
  const auto ctx = encode_turns(vocab, context, /*trailing_sep=*/true);
  out.insert(out.end(), ctx.tokens.begin(), ctx.tokens.end());
  out.push_back(special::kBos);
  return out;
}

PlanningModel::PlanningModel(ModelConfig config, Vocabulary vocab, ModelParams params)
    : config_(std::move(config)), vocab_(std::move(vocab)), params_(std::move(params)) {
  config_.validate();
  if (static_cast<size_t>(config_.vocab_size) != vocab_.size()) {
    throw std::invalid_argument("model: vocab_size " + std::to_string(config_.vocab_size) +
                                " does not match vocabulary of " + std::to_string(vocab_.size()));
  }
  if (!params_.same_shape(ModelParams::zeros(config_))) {
    throw std::invalid_argument("model: parameter shapes do not match the config");
  }
}

UtteranceRepr PlanningModel::encode_prefix(const Dialogue& d, size_t n) const {
  if (n < 1 || n > d.turns.size()) {
    throw std::out_of_range("encode_prefix: n=" + std::to_string(n) + " outside [1, " +
                            std::to_string(d.turns.size()) + "]");
  }
  const auto enc = encode_turns(vocab_, std::span(d.turns).first(n), /*trailing_sep=*/false);
  const Mat h = encoder_forward(config_, params_, enc.tokens, nullptr);
  return {n, h.row(static_cast<Eigen::Index>(enc.turns.back().last_word)).transpose()};
}

std::vector<UtteranceRepr> PlanningModel::prefix_reprs(std::span<const Utterance> turns) const {
  if (turns.empty()) return {};
  const auto enc = encode_turns(vocab_, turns, /*trailing_sep=*/false);
  const Mat h = encoder_forward(config_, params_, enc.tokens, nullptr);
  std::vector<UtteranceRepr> out;
  for (size_t i = 0; i < enc.turns.size(); ++i) {
    out.push_back({i + 1, h.row(static_cast<Eigen::Index>(enc.turns[i].last_word)).transpose()});
  }
  return out;
}

PlanResult PlanningModel::plan_next(std::span<const UtteranceRepr> prefixes) const {
  if (prefixes.empty()) throw std::invalid_argument("plan_next: empty prefix sequence");
  Mat s(static_cast<Eigen::Index>(prefixes.size()), config_.d_model);
  for (size_t i = 0; i < prefixes.size(); ++i) {
    if (prefixes[i].vector.size() != config_.d_model) {
      throw std::invalid_argument("plan_next: representation dimension mismatch");
    }
    s.row(static_cast<Eigen::Index>(i)) = prefixes[i].vector.transpose();
  }
  const Mat out = flow_forward(config_, params_, s, nullptr);
  PlanResult r;
  r.predicted.n = prefixes.back().n + 1;
  r.predicted.vector = out.row(out.rows() - 1).transpose();
  r.delta = r.predicted.vector - prefixes.back().vector;
  return r;
}

PlanResult PlanningModel::plan_from_history(std::span<const Utterance> history) const {
  const auto reprs = prefix_reprs(history);
  return plan_next(reprs);
}

LossBreakdown PlanningModel::compute_losses(const Dialogue& d, size_t target_n) const {
  if (target_n < 2 || target_n > d.turns.size()) {
    throw std::out_of_range("compute_losses: target_n=" + std::to_string(target_n) +
                            " outside [2, " + std::to_string(d.turns.size()) + "]");
  }
  Dialogue prefix{d.id, d.facts, {d.turns.begin(), d.turns.begin() + static_cast<long>(target_n)}};
  ObjectiveOptions opt;
  opt.first_target = target_n;
  return objective(prefix, opt, nullptr).sum;
}

double PlanningModel::kg_lm_loss(std::span<const std::string> facts,
                                 std::span<const Utterance> context,
                                 const Utterance& response) const {
  const auto words = tokenize(response.text, vocab_);
  if (words.empty()) throw std::invalid_argument("kg_lm_loss: empty response");
  auto tokens = encode_grounded_prompt(vocab_, facts, context);
  const size_t bos = tokens.size() - 1;
  tokens.insert(tokens.end(), words.begin(), words.end());
  tokens.push_back(special::kEos);
  const Mat h = encoder_forward(config_, params_, tokens, nullptr);
  const Mat rows = gather_rows(h, bos, tokens.size() - 2);
  return fused_nll(params_, rows, nullptr, std::span(tokens).subspan(bos + 1), nullptr, nullptr,
                   nullptr);
}

ObjectiveResult PlanningModel::objective(const Dialogue& d, const ObjectiveOptions& options,
                                         ModelParams* grad) const {
  const size_t n_turns = d.turns.size();
  if (n_turns < 2) throw std::invalid_argument("objective: dialogue needs at least two turns");
  if (options.first_target < 2 || options.first_target > n_turns) {
    throw std::invalid_argument("objective: first_target outside [2, |turns|]");
  }
  if (n_turns - 1 > static_cast<size_t>(config_.max_utterances)) {
    throw std::invalid_argument("objective: dialogue has more turns than max_utterances + 1");
  }
  const Eigen::Index dm = config_.d_model;
  const auto enc = encode_turns(vocab_, d.turns, /*trailing_sep=*/true);

  EncoderCache enc_cache;
  const Mat h = encoder_forward(config_, params_, enc.tokens, grad ? &enc_cache : nullptr);

  ObjectiveResult result;
  result.reprs.resize(static_cast<Eigen::Index>(n_turns), dm);
  for (size_t i = 0; i < n_turns; ++i) {
    result.reprs.row(static_cast<Eigen::Index>(i)) =
        h.row(static_cast<Eigen::Index>(enc.turns[i].last_word));
  }
  if (options.frozen_reprs) {
    if (options.frozen_reprs->rows() != result.reprs.rows() ||
        options.frozen_reprs->cols() != dm) {
      throw std::invalid_argument("objective: frozen representations have the wrong shape");
    }
    result.reprs = *options.frozen_reprs;
  }
  const Mat& reprs = result.reprs;

  FlowCache flow_cache;
  const Mat predicted = flow_forward(config_, params_, reprs.topRows(reprs.rows() - 1),
                                     grad ? &flow_cache : nullptr);

  Mat d_hidden;
  Mat d_predicted;
  if (grad) {
    d_hidden = Mat::Zero(h.rows(), h.cols());
    d_predicted = Mat::Zero(predicted.rows(), predicted.cols());
  }

  for (size_t n = options.first_target; n <= n_turns; ++n) {
    const auto target_row = static_cast<Eigen::Index>(n - 1);
    const auto pred_row = static_cast<Eigen::Index>(n - 2);
    const Eigen::VectorXd pred = predicted.row(pred_row).transpose();
    const Eigen::VectorXd target = reprs.row(target_row).transpose();
    const Eigen::VectorXd prev = reprs.row(target_row - 1).transpose();
    const Eigen::VectorXd delta = config_.oracle_delta ? Eigen::VectorXd(target - prev)
                                                       : Eigen::VectorXd(pred - prev);
    LossBreakdown lb;

    const Eigen::VectorXd diff = pred - target;
    lb.flow = diff.squaredNorm() / static_cast<double>(dm);

    const EncodedTurn& turn = enc.turns[n - 1];
    const Mat rows = gather_rows(h, turn.speaker_pos, turn.last_word);
    const auto gen_targets = std::span(enc.tokens).subspan(
        turn.speaker_pos + 1, turn.last_word - turn.speaker_pos + 1);
    Mat d_rows;
    Eigen::VectorXd d_delta = Eigen::VectorXd::Zero(dm);
    lb.gen = fused_nll(params_, rows, &delta, gen_targets, grad, grad ? &d_rows : nullptr,
                       &d_delta);
    result.gen_tokens += gen_targets.size();

    std::vector<TokenId> bow_targets;
    for (size_t pos = turn.first_word; pos <= turn.last_word; ++pos) {
      if (!is_special(enc.tokens[pos])) bow_targets.push_back(enc.tokens[pos]);
    }
    lb.bow = bow_nll(params_, delta, bow_targets, grad, &d_delta);
    result.bow_tokens += bow_targets.size();

    lb.total = lb.flow + lb.gen + lb.bow;
    result.per_target.push_back(lb);
    result.sum.flow += lb.flow;
    result.sum.gen += lb.gen;
    result.sum.bow += lb.bow;
    result.sum.total += lb.total;

    if (grad) {
      d_hidden.middleRows(static_cast<Eigen::Index>(turn.speaker_pos), d_rows.rows()) += d_rows;
      d_predicted.row(pred_row) += (2.0 / static_cast<double>(dm)) * diff.transpose();
      if (!config_.oracle_delta) d_predicted.row(pred_row) += d_delta.transpose();
    }
  }

  if (grad) {
    encoder_backward(config_, params_, enc_cache, d_hidden, *grad);
    flow_backward(config_, params_, flow_cache, d_predicted, *grad);
  }

  if (options.include_grounded) {
    const auto context = std::span(d.turns).first(n_turns - 1);
    auto tokens = encode_grounded_prompt(vocab_, d.facts, context);
    const size_t bos = tokens.size() - 1;
    const auto words = turn_words(vocab_, d.turns.back());
    tokens.insert(tokens.end(), words.begin(), words.end());
    tokens.push_back(special::kEos);
    EncoderCache kg_cache;
    const Mat kg_h = encoder_forward(config_, params_, tokens, grad ? &kg_cache : nullptr);
    const Mat rows = gather_rows(kg_h, bos, tokens.size() - 2);
    Mat d_rows;
    result.grounded = fused_nll(params_, rows, nullptr, std::span(tokens).subspan(bos + 1), grad,
                                grad ? &d_rows : nullptr, nullptr);
    result.grounded_tokens = tokens.size() - bos - 1;
    if (grad) {
      Mat d_kg = Mat::Zero(kg_h.rows(), kg_h.cols());
      d_kg.middleRows(static_cast<Eigen::Index>(bos), d_rows.rows()) = d_rows;
      encoder_backward(config_, params_, kg_cache, d_kg, *grad);
    }
  }
  return result;
}

RowVec PlanningModel::next_logits(std::span<const TokenId> tokens,
                                  const Eigen::VectorXd* delta) const {
  const Mat h = encoder_forward(config_, params_, tokens, nullptr);
  const Eigen::Index d = config_.d_model;
  RowVec z = h.row(h.rows() - 1) * params_.fuse_w.topRows(d) + params_.fuse_b;
  if (delta) z += delta->transpose() * params_.fuse_w.bottomRows(d);
  return z * params_.tok_emb.transpose();
}

Mat PlanningModel::sequence_logits(std::span<const TokenId> tokens) const {
  const Mat h = encoder_forward(config_, params_, tokens, nullptr);
  Mat z = h * params_.fuse_w.topRows(config_.d_model);
  z.rowwise() += params_.fuse_b.row(0);
  return z * params_.tok_emb.transpose();
}

std::vector<double> PlanningModel::response_log_probs(std::span<const Utterance> history,
                                                      std::span<const TokenId> response) const {
  if (response.empty()) throw std::invalid_argument("response_log_probs: empty response");
  auto tokens = encode_turns(vocab_, history, /*trailing_sep=*/true).tokens;
  const Speaker next = history.empty() ? Speaker::kA : other(history.back().speaker);
  const size_t start = tokens.size();
  tokens.push_back(speaker_token(next));
  tokens.insert(tokens.end(), response.begin(), response.end());
  tokens.push_back(special::kSep);
  const Mat logits = sequence_logits(tokens);
  std::vector<double> out;
  for (size_t pos = start; pos + 1 < tokens.size(); ++pos) {
    const RowVec lp = log_softmax(logits.row(static_cast<Eigen::Index>(pos)));
    out.push_back(lp[tokens[pos + 1]]);
  }
  return out;
}

}  // namespace dialflow
