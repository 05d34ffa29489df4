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

#include "dialflow/metrics/embedding_table.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dialflow/core/rng.h"

namespace dialflow {

EmbeddingTable EmbeddingTable::hashed(size_t dim, uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
  return EmbeddingTable(dim, seed);
}

EmbeddingTable EmbeddingTable::from_file(const std::filesystem::path& path, uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file " + path.string());
  std::map<std::string, Eigen::VectorXd> vectors;
  std::string line;
  size_t line_no = 0;
  size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::vector<double> values;
    double v;
    while (ls >> v) values.push_back(v);
    if (!ls.eof() || values.empty()) {
      throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                               ": expected 'word v1 ... vd'");
    }
    if (dim == 0) dim = values.size();
    if (values.size() != dim) {
      throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                               ": dimension mismatch");
    }
    vectors[word] = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(dim));
  }
  if (vectors.empty()) throw std::runtime_error("embedding file " + path.string() + " is empty");
  return from_vectors(vectors, seed);
}

EmbeddingTable EmbeddingTable::from_vectors(
    const std::map<std::string, Eigen::VectorXd>& vectors, uint64_t seed) {
  if (vectors.empty()) throw std::invalid_argument("from_vectors: no vectors");
  const auto dim = static_cast<size_t>(vectors.begin()->second.size());
  EmbeddingTable table(dim, seed);
  for (const auto& [w, v] : vectors) {
    if (static_cast<size_t>(v.size()) != dim) {
      throw std::invalid_argument("from_vectors: dimension mismatch for '" + w + "'");
    }
    table.table_.emplace(w, v);
  }
  return table;
}

Eigen::VectorXd EmbeddingTable::vector(std::string_view word) const {
  if (auto it = table_.find(std::string(word)); it != table_.end()) return it->second;
  Rng rng(mix_seed(fnv1a64(word), seed_));
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim_));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  return v / v.norm();
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace dialflow
