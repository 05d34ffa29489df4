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

#include "dialflow/model/layers.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dialflow {

namespace {

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluK = 0.044715;

Mat add_row(Mat m, const Mat& row) {
  m.rowwise() += row.row(0);
  return m;
}

Mat attention_forward(const BlockParams& p, const Mat& a, int n_heads, BlockCache& c) {
  const Eigen::Index T = a.rows();
  const Eigen::Index d = a.cols();
  const Eigen::Index dh = d / n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  c.q = add_row(a * p.wq, p.bq);
  c.k = add_row(a * p.wk, p.bk);
  c.v = add_row(a * p.wv, p.bv);
  c.o.resize(T, d);
  c.attn.assign(static_cast<size_t>(n_heads), Mat());
  for (int h = 0; h < n_heads; ++h) {
    const auto qh = c.q.middleCols(h * dh, dh);
    const auto kh = c.k.middleCols(h * dh, dh);
    const auto vh = c.v.middleCols(h * dh, dh);
    Mat s = (qh * kh.transpose()) * scale;
    Mat& att = c.attn[static_cast<size_t>(h)];
    att = Mat::Zero(T, T);
    for (Eigen::Index i = 0; i < T; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j <= i; ++j) mx = std::max(mx, s(i, j));
      double sum = 0.0;
      for (Eigen::Index j = 0; j <= i; ++j) {
        att(i, j) = std::exp(s(i, j) - mx);
        sum += att(i, j);
      }
      for (Eigen::Index j = 0; j <= i; ++j) att(i, j) /= sum;
    }
    c.o.middleCols(h * dh, dh) = att * vh;
  }
  return add_row(c.o * p.wo, p.bo);
}

Mat attention_backward(const BlockParams& p, const BlockCache& c, const Mat& dy, int n_heads,
                       BlockParams& g) {
  const Eigen::Index T = dy.rows();
  const Eigen::Index d = dy.cols();
  const Eigen::Index dh = d / n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  g.wo.noalias() += c.o.transpose() * dy;
  g.bo += dy.colwise().sum();
  const Mat d_o = dy * p.wo.transpose();
  Mat dq(T, d), dk(T, d), dv(T, d);
  for (int h = 0; h < n_heads; ++h) {
    const Mat& att = c.attn[static_cast<size_t>(h)];
    const auto qh = c.q.middleCols(h * dh, dh);
    const auto kh = c.k.middleCols(h * dh, dh);
    const auto vh = c.v.middleCols(h * dh, dh);
    const auto doh = d_o.middleCols(h * dh, dh);
    const Mat datt = doh * vh.transpose();
    dv.middleCols(h * dh, dh) = att.transpose() * doh;
    // Softmax Jacobian; masked entries have att == 0 and drop out.
    const Eigen::VectorXd row_dot = (datt.array() * att.array()).rowwise().sum();
    Mat ds = att.array() * (datt.colwise() - row_dot).array();
    ds *= scale;
    dq.middleCols(h * dh, dh) = ds * kh;
    dk.middleCols(h * dh, dh) = ds.transpose() * qh;
  }
  g.wq.noalias() += c.a1.transpose() * dq;
  g.bq += dq.colwise().sum();
  g.wk.noalias() += c.a1.transpose() * dk;
  g.bk += dk.colwise().sum();
  g.wv.noalias() += c.a1.transpose() * dv;
  g.bv += dv.colwise().sum();
  return dq * p.wq.transpose() + dk * p.wk.transpose() + dv * p.wv.transpose();
}

}  // namespace

Mat layer_norm(const Mat& x, const Mat& gain, const Mat& bias, LayerNormCache* cache) {
  const double d = static_cast<double>(x.cols());
  const Eigen::VectorXd mean = x.rowwise().sum() / d;
  Mat xc = x.colwise() - mean;
  const Eigen::VectorXd var = xc.array().square().rowwise().sum() / d;
  const Eigen::VectorXd inv = (var.array() + kLayerNormEps).rsqrt();
  Mat xhat = xc.array().colwise() * inv.array();
  Mat y = (xhat.array().rowwise() * gain.row(0).array()).rowwise() + bias.row(0).array();
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = inv;
  }
  return y;
}

Mat layer_norm_backward(const Mat& dy, const Mat& gain, const LayerNormCache& cache, Mat& dgain,
                        Mat& dbias) {
  const double d = static_cast<double>(dy.cols());
  dgain += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
  dbias += dy.colwise().sum();
  const Mat dxhat = dy.array().rowwise() * gain.row(0).array();
  const Eigen::VectorXd mean_dxhat = dxhat.rowwise().sum() / d;
  const Eigen::VectorXd mean_dxhat_xhat = (dxhat.array() * cache.xhat.array()).rowwise().sum() / d;
  Mat dx = dxhat.colwise() - mean_dxhat;
  dx -= (cache.xhat.array().colwise() * mean_dxhat_xhat.array()).matrix();
  return dx.array().colwise() * cache.inv_std.array();
}

Mat gelu(const Mat& x) {
  return x.unaryExpr([](double v) {
    return 0.5 * v * (1.0 + std::tanh(kGeluC * (v + kGeluK * v * v * v)));
  });
}

Mat gelu_backward(const Mat& dy, const Mat& x) {
  const Mat deriv = x.unaryExpr([](double v) {
    const double t = std::tanh(kGeluC * (v + kGeluK * v * v * v));
    return 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluK * v * v);
  });
  return dy.cwiseProduct(deriv);
}

Mat block_forward(const BlockParams& p, const Mat& x, int n_heads, BlockCache* cache) {
  BlockCache local;
  BlockCache& c = cache ? *cache : local;
  c.x_in = x;
  c.a1 = layer_norm(x, p.ln1_g, p.ln1_b, &c.ln1);
  c.x_mid = x + attention_forward(p, c.a1, n_heads, c);
  c.a2 = layer_norm(c.x_mid, p.ln2_g, p.ln2_b, &c.ln2);
  c.pre = add_row(c.a2 * p.w1, p.b1);
  c.act = gelu(c.pre);
  return c.x_mid + add_row(c.act * p.w2, p.b2);
}

Mat block_backward(const BlockParams& p, const BlockCache& c, const Mat& dy, int n_heads,
                   BlockParams& g) {
  g.w2.noalias() += c.act.transpose() * dy;
  g.b2 += dy.colwise().sum();
  const Mat dpre = gelu_backward(dy * p.w2.transpose(), c.pre);
  g.w1.noalias() += c.a2.transpose() * dpre;
  g.b1 += dpre.colwise().sum();
  const Mat da2 = dpre * p.w1.transpose();
  const Mat dx_mid = dy + layer_norm_backward(da2, p.ln2_g, c.ln2, g.ln2_g, g.ln2_b);
  const Mat da1 = attention_backward(p, c, dx_mid, n_heads, g);
  return dx_mid + layer_norm_backward(da1, p.ln1_g, c.ln1, g.ln1_g, g.ln1_b);
}

RowVec log_softmax(const RowVec& logits) {
  const double mx = logits.maxCoeff();
  const double lse = mx + std::log((logits.array() - mx).exp().sum());
  return logits.array() - lse;
}

Mat encoder_forward(const ModelConfig& cfg, const ModelParams& p, std::span<const TokenId> tokens,
                    EncoderCache* cache) {
  const auto T = static_cast<Eigen::Index>(tokens.size());
  if (T == 0) throw std::invalid_argument("encoder: empty sequence");
  if (T > cfg.max_seq) {
    throw std::invalid_argument("encoder: sequence of " + std::to_string(T) +
                                " tokens exceeds max_seq " + std::to_string(cfg.max_seq));
  }
  Mat x(T, cfg.d_model);
  for (Eigen::Index t = 0; t < T; ++t) {
    const TokenId id = tokens[static_cast<size_t>(t)];
    if (id < 0 || id >= p.tok_emb.rows()) throw std::out_of_range("encoder: token id out of range");
    x.row(t) = p.tok_emb.row(id) + p.pos_emb.row(t);
  }
  if (cache) {
    cache->tokens.assign(tokens.begin(), tokens.end());
    cache->blocks.resize(p.blocks.size());
  }
  for (size_t l = 0; l < p.blocks.size(); ++l) {
    x = block_forward(p.blocks[l], x, cfg.n_heads, cache ? &cache->blocks[l] : nullptr);
  }
  if (cache) cache->x_final = x;
  return layer_norm(x, p.lnf_g, p.lnf_b, cache ? &cache->lnf : nullptr);
}

void encoder_backward(const ModelConfig& cfg, const ModelParams& p, const EncoderCache& cache,
                      const Mat& d_hidden, ModelParams& grad) {
  Mat dx = layer_norm_backward(d_hidden, p.lnf_g, cache.lnf, grad.lnf_g, grad.lnf_b);
  for (size_t l = p.blocks.size(); l-- > 0;) {
    dx = block_backward(p.blocks[l], cache.blocks[l], dx, cfg.n_heads, grad.blocks[l]);
  }
  for (size_t t = 0; t < cache.tokens.size(); ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    grad.tok_emb.row(cache.tokens[t]) += dx.row(row);
    grad.pos_emb.row(row) += dx.row(row);
  }
}

Mat flow_forward(const ModelConfig& cfg, const ModelParams& p, const Mat& prefix_reprs,
                 FlowCache* cache) {
  const Eigen::Index m = prefix_reprs.rows();
  if (m == 0) throw std::invalid_argument("flow: empty prefix sequence");
  if (m > cfg.max_utterances) {
    throw std::invalid_argument("flow: " + std::to_string(m) + " prefixes exceed max_utterances " +
                                std::to_string(cfg.max_utterances));
  }
  Mat x = prefix_reprs + p.utt_pos_emb.topRows(m);
  if (cache) cache->blocks.resize(p.flow_blocks.size());
  for (size_t l = 0; l < p.flow_blocks.size(); ++l) {
    x = block_forward(p.flow_blocks[l], x, cfg.n_heads, cache ? &cache->blocks[l] : nullptr);
  }
  if (cache) cache->x_final = x;
  return layer_norm(x, p.flow_lnf_g, p.flow_lnf_b, cache ? &cache->lnf : nullptr);
}

void flow_backward(const ModelConfig& cfg, const ModelParams& p, const FlowCache& cache,
                   const Mat& d_out, ModelParams& grad) {
  Mat dx = layer_norm_backward(d_out, p.flow_lnf_g, cache.lnf, grad.flow_lnf_g, grad.flow_lnf_b);
  for (size_t l = p.flow_blocks.size(); l-- > 0;) {
    dx = block_backward(p.flow_blocks[l], cache.blocks[l], dx, cfg.n_heads, grad.flow_blocks[l]);
  }
  grad.utt_pos_emb.topRows(dx.rows()) += dx;
}

}  // namespace dialflow
