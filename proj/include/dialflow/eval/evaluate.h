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

#ifndef DIALFLOW_EVAL_EVALUATE_H_
#define DIALFLOW_EVAL_EVALUATE_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dialflow/metrics/embedding_table.h"
#include "json.hpp"

namespace dialflow {

struct EvalReport {
  std::vector<std::string> metrics;  // in request order
  std::vector<std::map<std::string, double>> examples;
  std::map<std::string, double> means;
  size_t count = 0;

  nlohmann::json to_json() const;
  std::string table() const;
};

// Line i of predictions is scored against line i of references with each
// named metric ("bleu", "meteor", "embed"). A pair where either side has no
// words scores 0. Errors: unequal line counts, unknown metric, no metrics.
EvalReport evaluate_lines(std::span<const std::string> predictions,
                          std::span<const std::string> references,
                          std::span<const std::string> metrics, const EmbeddingTable& table);

EvalReport evaluate_corpus(const std::filesystem::path& predictions,
                           const std::filesystem::path& references,
                           std::span<const std::string> metrics, const EmbeddingTable& table);

}  // namespace dialflow

#endif  // DIALFLOW_EVAL_EVALUATE_H_
