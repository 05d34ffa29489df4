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

#include "dialflow/model/params.h"

#include <cmath>

#include "dialflow/core/rng.h"

namespace dialflow {

namespace {

BlockParams zero_block(int d, int ff) {
  BlockParams b;
  b.ln1_g = Mat::Zero(1, d);
  b.ln1_b = Mat::Zero(1, d);
  b.wq = Mat::Zero(d, d);
  b.bq = Mat::Zero(1, d);
  b.wk = Mat::Zero(d, d);
  b.bk = Mat::Zero(1, d);
  b.wv = Mat::Zero(d, d);
  b.bv = Mat::Zero(1, d);
  b.wo = Mat::Zero(d, d);
  b.bo = Mat::Zero(1, d);
  b.ln2_g = Mat::Zero(1, d);
  b.ln2_b = Mat::Zero(1, d);
  b.w1 = Mat::Zero(d, ff);
  b.b1 = Mat::Zero(1, ff);
  b.w2 = Mat::Zero(ff, d);
  b.b2 = Mat::Zero(1, d);
  return b;
}

template <typename Params, typename Out>
void collect(Params& p, Out& out) {
  out.push_back({"tok_emb", &p.tok_emb});
  out.push_back({"pos_emb", &p.pos_emb});
  auto block = [&out](auto& b, const std::string& prefix) {
    out.push_back({prefix + ".ln1_g", &b.ln1_g});
    out.push_back({prefix + ".ln1_b", &b.ln1_b});
    out.push_back({prefix + ".wq", &b.wq});
    out.push_back({prefix + ".bq", &b.bq});
    out.push_back({prefix + ".wk", &b.wk});
    out.push_back({prefix + ".bk", &b.bk});
    out.push_back({prefix + ".wv", &b.wv});
    out.push_back({prefix + ".bv", &b.bv});
    out.push_back({prefix + ".wo", &b.wo});
    out.push_back({prefix + ".bo", &b.bo});
    out.push_back({prefix + ".ln2_g", &b.ln2_g});
    out.push_back({prefix + ".ln2_b", &b.ln2_b});
    out.push_back({prefix + ".w1", &b.w1});
    out.push_back({prefix + ".b1", &b.b1});
    out.push_back({prefix + ".w2", &b.w2});
    out.push_back({prefix + ".b2", &b.b2});
  };
  for (size_t i = 0; i < p.blocks.size(); ++i) block(p.blocks[i], "block" + std::to_string(i));
  out.push_back({"lnf_g", &p.lnf_g});
  out.push_back({"lnf_b", &p.lnf_b});
  out.push_back({"utt_pos_emb", &p.utt_pos_emb});
  for (size_t i = 0; i < p.flow_blocks.size(); ++i) {
    block(p.flow_blocks[i], "flow" + std::to_string(i));
  }
  out.push_back({"flow_lnf_g", &p.flow_lnf_g});
  out.push_back({"flow_lnf_b", &p.flow_lnf_b});
  out.push_back({"fuse_w", &p.fuse_w});
  out.push_back({"fuse_b", &p.fuse_b});
  out.push_back({"bow_w", &p.bow_w});
  out.push_back({"bow_b", &p.bow_b});
}

void fill_normal(Mat& m, double stddev, Rng& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = stddev * rng.normal();
  }
}

void init_block(BlockParams& b, const ModelConfig& cfg, Rng& rng) {
  const double d = cfg.d_model;
  b.ln1_g.setOnes();
  b.ln2_g.setOnes();
  fill_normal(b.wq, 1.0 / std::sqrt(d), rng);
  fill_normal(b.wk, 1.0 / std::sqrt(d), rng);
  fill_normal(b.wv, 1.0 / std::sqrt(d), rng);
  fill_normal(b.wo, 0.5 / std::sqrt(d), rng);
  fill_normal(b.w1, 1.0 / std::sqrt(d), rng);
  fill_normal(b.w2, 0.5 / std::sqrt(static_cast<double>(cfg.d_ff)), rng);
}

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& cfg) {
  const int d = cfg.d_model;
  ModelParams p;
  p.tok_emb = Mat::Zero(cfg.vocab_size, d);
  p.pos_emb = Mat::Zero(cfg.max_seq, d);
  for (int i = 0; i < cfg.n_layers; ++i) p.blocks.push_back(zero_block(d, cfg.d_ff));
  p.lnf_g = Mat::Zero(1, d);
  p.lnf_b = Mat::Zero(1, d);
  p.utt_pos_emb = Mat::Zero(cfg.max_utterances, d);
  for (int i = 0; i < cfg.flow_layers; ++i) p.flow_blocks.push_back(zero_block(d, cfg.d_ff));
  p.flow_lnf_g = Mat::Zero(1, d);
  p.flow_lnf_b = Mat::Zero(1, d);
  p.fuse_w = Mat::Zero(2 * d, d);
  p.fuse_b = Mat::Zero(1, d);
  p.bow_w = Mat::Zero(d, cfg.vocab_size);
  p.bow_b = Mat::Zero(1, cfg.vocab_size);
  return p;
}

ModelParams ModelParams::initialize(const ModelConfig& cfg, Init init) {
  cfg.validate();
  ModelParams p = zeros(cfg);
  Rng rng(mix_seed(cfg.seed, 0x1417));
  const int d = cfg.d_model;
  fill_normal(p.tok_emb, cfg.init_std, rng);
  fill_normal(p.pos_emb, cfg.init_std, rng);
  for (auto& b : p.blocks) init_block(b, cfg, rng);
  p.lnf_g.setOnes();
  fill_normal(p.utt_pos_emb, cfg.init_std, rng);
  for (auto& b : p.flow_blocks) init_block(b, cfg, rng);
  p.flow_lnf_g.setOnes();
  // Start the fusion as a near-identity on the hidden state.
  fill_normal(p.fuse_w, 0.1 / std::sqrt(static_cast<double>(d)), rng);
  p.fuse_w.topRows(d) += Mat::Identity(d, d);
  fill_normal(p.bow_w, 1.0 / std::sqrt(static_cast<double>(d)), rng);
  if (init == Init::kUniformLogits) {
    p.tok_emb.setZero();
    p.bow_w.setZero();
    p.bow_b.setZero();
  }
  return p;
}

std::vector<NamedTensor<Mat>> ModelParams::tensors() {
  std::vector<NamedTensor<Mat>> out;
  collect(*this, out);
  return out;
}

std::vector<NamedTensor<const Mat>> ModelParams::tensors() const {
  std::vector<NamedTensor<const Mat>> out;
  collect(*this, out);
  return out;
}

size_t ModelParams::num_values() const {
  size_t n = 0;
  for (const auto& t : tensors()) n += static_cast<size_t>(t.tensor->size());
  return n;
}

bool ModelParams::all_finite() const {
  for (const auto& t : tensors()) {
    if (!t.tensor->allFinite()) return false;
  }
  return true;
}

void ModelParams::set_zero() {
  for (auto& t : tensors()) t.tensor->setZero();
}

bool ModelParams::same_shape(const ModelParams& other) const {
  const auto a = tensors();
  const auto b = other.tensors();
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].tensor->rows() != b[i].tensor->rows() ||
        a[i].tensor->cols() != b[i].tensor->cols()) {
      return false;
    }
  }
  return true;
}

}  // namespace dialflow
