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

#ifndef DIALFLOW_CORE_RNG_H_
#define DIALFLOW_CORE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dialflow {

// Seeded random source. The engine is std::mt19937_64; the conversions to
// uniform/normal/integer draws are written out here because the standard
// distributions are implementation-defined, and checkpoints and corpora must
// be bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  uint64_t uniform_int(uint64_t n);

  // Uniform integer in [lo, hi], inclusive.
  int64_t uniform_range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(uniform_int(static_cast<uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
uint64_t mix_seed(uint64_t a, uint64_t b);

// FNV-1a, 64-bit.
uint64_t fnv1a64(std::string_view bytes);

}  // namespace dialflow

#endif  // DIALFLOW_CORE_RNG_H_
