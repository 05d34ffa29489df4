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

#ifndef DIALFLOW_MODEL_CONFIG_H_
#define DIALFLOW_MODEL_CONFIG_H_

#include <cstdint>

#include "json.hpp"

namespace dialflow {

struct ModelConfig {
  int d_model = 64;
  int n_layers = 2;
  int n_heads = 2;
  int d_ff = 128;
  int flow_layers = 1;
  int max_seq = 256;
  int max_utterances = 16;
  int vocab_size = 0;
  double top_p = 0.9;
  uint64_t seed = 1;
  // Storage width of checkpoint tensors (64 or 32). Arithmetic is always
  // double precision.
  int float_width = 64;
  // Ablation: condition generation and bag-of-words on the encoder
  // difference U_n - U_{n-1} instead of the flow block's prediction.
  bool oracle_delta = false;
  double init_std = 0.02;

  int head_dim() const { return d_model / n_heads; }

  // Throws std::invalid_argument.
  void validate() const;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);

  // d_model 8, one layer and one flow layer, vocabulary 32.
  static ModelConfig micro();

  bool operator==(const ModelConfig&) const = default;
};

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_CONFIG_H_
