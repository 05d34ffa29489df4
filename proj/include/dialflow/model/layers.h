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

// Forward and reverse-mode passes for the transformer pieces. Activations
// are row-major in the sense that row t is position t. Backward functions
// accumulate (+=) into the gradient tensors they are handed.

#ifndef DIALFLOW_MODEL_LAYERS_H_
#define DIALFLOW_MODEL_LAYERS_H_

#include <span>
#include <vector>

#include "dialflow/core/text.h"
#include "dialflow/model/params.h"

namespace dialflow {

inline constexpr double kLayerNormEps = 1e-5;

struct LayerNormCache {
  Mat xhat;
  Eigen::VectorXd inv_std;
};

Mat layer_norm(const Mat& x, const Mat& gain, const Mat& bias, LayerNormCache* cache);
Mat layer_norm_backward(const Mat& dy, const Mat& gain, const LayerNormCache& cache,
                        Mat& dgain, Mat& dbias);

// tanh approximation.
Mat gelu(const Mat& x);
Mat gelu_backward(const Mat& dy, const Mat& x);

struct BlockCache {
  Mat x_in;
  LayerNormCache ln1;
  Mat a1, q, k, v;
  std::vector<Mat> attn;  // per head, T x T, zero above the diagonal
  Mat o;
  Mat x_mid;
  LayerNormCache ln2;
  Mat a2, pre, act;
};

// x + CausalSelfAttention(LN1(x)), then + FFN(LN2(.)).
Mat block_forward(const BlockParams& p, const Mat& x, int n_heads, BlockCache* cache);
Mat block_backward(const BlockParams& p, const BlockCache& cache, const Mat& dy, int n_heads,
                   BlockParams& grad);

// Numerically stable log-softmax of one row.
RowVec log_softmax(const RowVec& logits);

struct EncoderCache {
  std::vector<TokenId> tokens;
  std::vector<BlockCache> blocks;
  Mat x_final;
  LayerNormCache lnf;
};

// Token + position embeddings through the causal stack and final norm.
// Returns T x d hidden states.
Mat encoder_forward(const ModelConfig& cfg, const ModelParams& p, std::span<const TokenId> tokens,
                    EncoderCache* cache);
void encoder_backward(const ModelConfig& cfg, const ModelParams& p, const EncoderCache& cache,
                      const Mat& d_hidden, ModelParams& grad);

struct FlowCache {
  std::vector<BlockCache> blocks;
  Mat x_final;
  LayerNormCache lnf;
};

// Utterance-level causal transformer. Row i of the output is the predicted
// representation of the prefix that ends one utterance after input row i.
// Inputs are treated as constants: backward produces no input gradient.
Mat flow_forward(const ModelConfig& cfg, const ModelParams& p, const Mat& prefix_reprs,
                 FlowCache* cache);
void flow_backward(const ModelConfig& cfg, const ModelParams& p, const FlowCache& cache,
                   const Mat& d_out, ModelParams& grad);

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_LAYERS_H_
