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

#include "dialflow/model/grad_check.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dialflow/core/rng.h"

namespace dialflow {

Dialogue micro_dialogue() {
  Dialogue d;
  d.id = "micro";
  d.facts = {"paris has old bridges"};
  d.turns = {{Speaker::kA, "i like paris", {}},
             {Speaker::kB, "me too , really", {}},
             {Speaker::kA, "what about rome ?", {}}};
  return d;
}

Vocabulary micro_vocab() {
  const std::vector<std::string> words = {
      "i",    "like", "paris", "me",   "too",  ",",    "really", "what",
      "about", "rome", "?",    "has",  "old",  "bridges", "cats", "dogs",
      "rain", "sun",  "tea",   "jazz", "blue", "green", "red",   "fast"};
  return Vocabulary(words);
}

GradCheckReport grad_check(const PlanningModel& model, const Dialogue& d,
                           const GradCheckOptions& options) {
  if (!(options.eps > 0.0)) throw std::invalid_argument("grad_check: eps must be > 0");
  const auto t0 = std::chrono::steady_clock::now();
  ObjectiveOptions oo;
  oo.include_grounded = options.include_grounded;

  ModelParams analytic = ModelParams::zeros(model.config());
  const ObjectiveResult base = model.objective(d, oo, &analytic);
  const Mat frozen = base.reprs;
  oo.frozen_reprs = &frozen;

  PlanningModel probe = model;
  Rng rng(mix_seed(options.seed, 0x6c4e));
  GradCheckReport report;
  report.eps = options.eps;
  report.floor = options.floor;

  auto probe_tensors = probe.mutable_params().tensors();
  const auto grad_tensors = std::as_const(analytic).tensors();
  for (size_t ti = 0; ti < probe_tensors.size(); ++ti) {
    Mat& w = *probe_tensors[ti].tensor;
    const Mat& g = *grad_tensors[ti].tensor;
    std::vector<Eigen::Index> coords(static_cast<size_t>(w.size()));
    std::iota(coords.begin(), coords.end(), Eigen::Index{0});
    if (options.sample > 0 && options.sample < coords.size()) {
      for (size_t i = 0; i < options.sample; ++i) {
        const size_t j = i + rng.uniform_int(coords.size() - i);
        std::swap(coords[i], coords[j]);
      }
      coords.resize(options.sample);
      std::sort(coords.begin(), coords.end());
    }
    TensorCheck tc;
    tc.name = probe_tensors[ti].name;
    for (Eigen::Index k : coords) {
      double& x = w.data()[k];
      const double saved = x;
      x = saved + options.eps;
      const double up = probe.objective(d, oo, nullptr).value();
      x = saved - options.eps;
      const double down = probe.objective(d, oo, nullptr).value();
      x = saved;
      const double numeric = (up - down) / (2.0 * options.eps);
      const double a = g.data()[k];
      const double rel =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), options.floor});
      if (tc.checked == 0 || rel > tc.rel_error) {
        tc.rel_error = rel;
        tc.analytic = a;
        tc.numeric = numeric;
        tc.row = k % w.rows();
        tc.col = k / w.rows();
      }
      ++tc.checked;
    }
    report.coordinates += tc.checked;
    if (tc.rel_error >= report.max_rel_error) {
      report.max_rel_error = tc.rel_error;
      report.worst_tensor = tc.name;
    }
    report.tensors.push_back(std::move(tc));
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

GradCheckReport grad_check_micro(const GradCheckOptions& options, uint64_t seed) {
  ModelConfig cfg = ModelConfig::micro();
  cfg.seed = seed;
  cfg.float_width = 64;
  Vocabulary vocab = micro_vocab();
  if (static_cast<int>(vocab.size()) != cfg.vocab_size) {
    throw std::logic_error("grad_check_micro: micro vocabulary does not match the config");
  }
  ModelParams params = ModelParams::initialize(cfg);
  const PlanningModel model(cfg, std::move(vocab), std::move(params));
  return grad_check(model, micro_dialogue(), options);
}

}  // namespace dialflow
