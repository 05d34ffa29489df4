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

#ifndef DIALFLOW_CORE_SYNTH_CORPUS_H_
#define DIALFLOW_CORE_SYNTH_CORPUS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialflow/core/dialogue.h"

namespace dialflow {

// A scripted topic: its content lexicon, its own small grammar ("{0}" is the
// content-word slot) and the topic the script moves to when the
// conversation drifts.
struct SynthTopic {
  std::string name;
  std::vector<std::string> lexicon;
  std::vector<std::string> grammar;
  size_t successor;
};

std::span<const SynthTopic> synth_topics();

// Index of the topic whose lexicon holds `word`, if any. Words outside every
// lexicon are template words.
std::optional<size_t> synth_topic_of(std::string_view word);

// Probability that a turn moves to the successor topic.
inline constexpr double kSynthTopicShift = 0.2;

// Deterministic templated conversations: each dialogue walks a topic chain,
// 4-10 alternating turns, every content word drawn from the active topic.
std::vector<Dialogue> gen_synth_corpus(uint64_t seed, size_t n_dialogues);

}  // namespace dialflow

#endif  // DIALFLOW_CORE_SYNTH_CORPUS_H_
