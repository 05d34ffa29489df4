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

#ifndef DIALFLOW_MODEL_GRAD_CHECK_H_
#define DIALFLOW_MODEL_GRAD_CHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dialflow/core/dialogue.h"
#include "dialflow/model/planning_model.h"

namespace dialflow {

struct TensorCheck {
  std::string name;
  size_t checked = 0;
  // Worst coordinate.
  long row = 0, col = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double max_rel_error = 0.0;
  std::string worst_tensor;
  size_t coordinates = 0;
  double eps = 0.0;
  double floor = 0.0;
  double seconds = 0.0;
};

struct GradCheckOptions {
  double eps = 1e-5;
  // Denominator floor: |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  // Coordinates per tensor; 0 checks all of them.
  size_t sample = 0;
  uint64_t seed = 1;
  bool include_grounded = true;
};

// The fixed three-utterance dialogue over a 24-word vocabulary used by the
// micro check.
Dialogue micro_dialogue();
Vocabulary micro_vocab();

// Central differences of the full training objective on `d` against the
// analytic gradient. Prefix representations are held at their unperturbed
// values, matching how the analytic gradient treats them.
GradCheckReport grad_check(const PlanningModel& model, const Dialogue& d,
                           const GradCheckOptions& options = {});

// Micro config, random init from cfg.seed, micro_dialogue().
GradCheckReport grad_check_micro(const GradCheckOptions& options = {}, uint64_t seed = 1);

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_GRAD_CHECK_H_
