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

#include "dialflow/eval/evaluate.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dialflow/core/text.h"
#include "dialflow/metrics/metrics.h"

namespace dialflow {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("evaluate: cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["count"] = count;
  j["metrics"] = metrics;
  j["means"] = means;
  j["examples"] = examples;
  return j;
}

std::string EvalReport::table() const {
  std::string out = "metric       mean      (n=" + std::to_string(count) + ")\n";
  for (const auto& m : metrics) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-12s %.6f\n", m.c_str(), means.at(m));
    out += buf;
  }
  return out;
}

EvalReport evaluate_lines(std::span<const std::string> predictions,
                          std::span<const std::string> references,
                          std::span<const std::string> metrics, const EmbeddingTable& table) {
  if (predictions.size() != references.size()) {
    throw std::invalid_argument("evaluate: " + std::to_string(predictions.size()) +
                                " predictions but " + std::to_string(references.size()) +
                                " references");
  }
  if (metrics.empty()) throw std::invalid_argument("evaluate: no metrics requested");
  std::vector<Metric> fns;
  for (const auto& m : metrics) fns.push_back(metric_by_name(m, &table));

  EvalReport r;
  r.metrics.assign(metrics.begin(), metrics.end());
  r.count = predictions.size();
  for (const auto& m : metrics) r.means[m] = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const Words hyp = split_words(predictions[i]);
    const Words ref = split_words(references[i]);
    std::map<std::string, double> row;
    for (size_t k = 0; k < fns.size(); ++k) {
      const double v = hyp.empty() || ref.empty() ? 0.0 : fns[k](hyp, ref);
      row[metrics[k]] = v;
      r.means[metrics[k]] += v;
    }
    r.examples.push_back(std::move(row));
  }
  if (r.count > 0) {
    for (auto& [name, v] : r.means) v /= static_cast<double>(r.count);
  }
  return r;
}

EvalReport evaluate_corpus(const std::filesystem::path& predictions,
                           const std::filesystem::path& references,
                           std::span<const std::string> metrics, const EmbeddingTable& table) {
  return evaluate_lines(read_lines(predictions), read_lines(references), metrics, table);
}

}  // namespace dialflow
