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

#include "dialflow/model/config.h"

#include <stdexcept>
#include <string>

#include "dialflow/core/text.h"

namespace dialflow {

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("model config: " + what); };
  if (d_model <= 0 || n_heads <= 0) fail("d_model and n_heads must be positive");
  if (d_model % n_heads != 0) fail("d_model must be divisible by n_heads");
  if (n_layers < 1 || flow_layers < 1) fail("n_layers and flow_layers must be >= 1");
  if (d_ff <= 0) fail("d_ff must be positive");
  if (max_seq < 4) fail("max_seq too small");
  if (max_utterances < 1) fail("max_utterances must be >= 1");
  if (vocab_size <= special::kCount) fail("vocab_size must exceed the special tokens");
  if (!(top_p > 0.0 && top_p <= 1.0)) fail("top_p must be in (0, 1]");
  if (float_width != 32 && float_width != 64) fail("float_width must be 32 or 64");
  if (!(init_std > 0.0)) fail("init_std must be positive");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"d_model", d_model},         {"n_layers", n_layers},
          {"n_heads", n_heads},         {"d_ff", d_ff},
          {"flow_layers", flow_layers}, {"max_seq", max_seq},
          {"max_utterances", max_utterances}, {"vocab_size", vocab_size},
          {"top_p", top_p},             {"seed", seed},
          {"float_width", float_width}, {"oracle_delta", oracle_delta},
          {"init_std", init_std}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.d_model = j.value("d_model", c.d_model);
  c.n_layers = j.value("n_layers", c.n_layers);
  c.n_heads = j.value("n_heads", c.n_heads);
  c.d_ff = j.value("d_ff", c.d_ff);
  c.flow_layers = j.value("flow_layers", c.flow_layers);
  c.max_seq = j.value("max_seq", c.max_seq);
  c.max_utterances = j.value("max_utterances", c.max_utterances);
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.top_p = j.value("top_p", c.top_p);
  c.seed = j.value("seed", c.seed);
  c.float_width = j.value("float_width", c.float_width);
  c.oracle_delta = j.value("oracle_delta", c.oracle_delta);
  c.init_std = j.value("init_std", c.init_std);
  return c;
}

ModelConfig ModelConfig::micro() {
  ModelConfig c;
  c.d_model = 8;
  c.n_layers = 1;
  c.n_heads = 2;
  c.d_ff = 16;
  c.flow_layers = 1;
  c.max_seq = 32;
  c.max_utterances = 4;
  c.vocab_size = 32;
  c.init_std = 0.3;
  return c;
}

}  // namespace dialflow
