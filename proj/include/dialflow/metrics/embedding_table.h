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

#ifndef DIALFLOW_METRICS_EMBEDDING_TABLE_H_
#define DIALFLOW_METRICS_EMBEDDING_TABLE_H_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>

namespace dialflow {

// Word vectors for the greedy embedding matcher. Words missing from an
// explicit table get the deterministic hash-seeded unit vector, so every
// word has a vector.
class EmbeddingTable {
 public:
  static EmbeddingTable hashed(size_t dim = 64, uint64_t seed = 0);

  // Text lines "word v1 ... vd". Throws std::runtime_error on a ragged or
  // unparsable line.
  static EmbeddingTable from_file(const std::filesystem::path& path, uint64_t seed = 0);

  static EmbeddingTable from_vectors(const std::map<std::string, Eigen::VectorXd>& vectors,
                                     uint64_t seed = 0);

  size_t dim() const { return dim_; }
  uint64_t seed() const { return seed_; }

  Eigen::VectorXd vector(std::string_view word) const;

 private:
  EmbeddingTable(size_t dim, uint64_t seed) : dim_(dim), seed_(seed) {}

  size_t dim_;
  uint64_t seed_;
  std::unordered_map<std::string, Eigen::VectorXd> table_;
};

// Cosine similarity, 0 when either vector is zero.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace dialflow

#endif  // DIALFLOW_METRICS_EMBEDDING_TABLE_H_
