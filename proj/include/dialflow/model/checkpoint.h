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

// Binary checkpoint. All integers little-endian.
//
//   "DPM1"  u32 version  u32 n  n bytes of JSON {"config":..,"vocab":[..]}
//   u32 tensor count, then per tensor:
//     u32 name length, name bytes, u8 dtype (0 = f64, 1 = f32),
//     u32 rank (2), u64 rows, u64 cols, row-major values
//
// config.float_width picks the dtype.

#ifndef DIALFLOW_MODEL_CHECKPOINT_H_
#define DIALFLOW_MODEL_CHECKPOINT_H_

#include <filesystem>
#include <string>

#include "dialflow/model/planning_model.h"

namespace dialflow {

inline constexpr uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const PlanningModel& model);

// Errors (std::runtime_error): bad magic or version, truncation, trailing
// bytes, unknown or missing tensors, shape mismatch, non-finite values.
PlanningModel parse_checkpoint(const std::string& bytes);

void save_checkpoint(const PlanningModel& model, const std::filesystem::path& path);
PlanningModel load_checkpoint(const std::filesystem::path& path);

}  // namespace dialflow

#endif  // DIALFLOW_MODEL_CHECKPOINT_H_
