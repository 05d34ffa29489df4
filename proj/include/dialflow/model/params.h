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

#ifndef DIALFLOW_MODEL_PARAMS_H_
#define DIALFLOW_MODEL_PARAMS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dialflow/model/config.h"

namespace dialflow {

using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

// One pre-norm transformer block. Biases and norm parameters are 1 x n.
struct BlockParams {
  Mat ln1_g, ln1_b;
  Mat wq, bq, wk, bk, wv, bv, wo, bo;
  Mat ln2_g, ln2_b;
  Mat w1, b1, w2, b2;
};

template <typename T>
struct NamedTensor {
  std::string name;
  T* tensor;
};

// All learnable tensors. The token embedding doubles as the output
// projection of the language-model head.
struct ModelParams {
  Mat tok_emb;  // vocab x d
  Mat pos_emb;  // max_seq x d
  std::vector<BlockParams> blocks;
  Mat lnf_g, lnf_b;

  // Flow block over utterance-prefix representations.
  Mat utt_pos_emb;  // max_utterances x d
  std::vector<BlockParams> flow_blocks;
  Mat flow_lnf_g, flow_lnf_b;

  Mat fuse_w, fuse_b;  // [h ; delta] (2d) -> d
  Mat bow_w, bow_b;    // delta (d) -> vocab

  enum class Init {
    kRandom,
    // Token embeddings and the bag-of-words projection start at zero, so
    // every output distribution is uniform.
    kUniformLogits,
  };

  static ModelParams zeros(const ModelConfig& cfg);
  static ModelParams initialize(const ModelConfig& cfg, Init init = Init::kRandom);

  // Stable order; names are unique. Checkpoints and optimizers rely on it.
  std::vector<NamedTensor<Mat>> tensors();
  std::vector<NamedTensor<const Mat>> tensors() const;

  size_t num_values() const;
  bool all_finite() const;
  void set_zero();
  bool same_shape(const ModelParams& other) const;
};

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_PARAMS_H_
