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

// Rule-based contradiction check between a candidate and what the bot has
// already said about itself.

#ifndef DIALFLOW_SCORING_CONFLICT_H_
#define DIALFLOW_SCORING_CONFLICT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialflow/core/dialogue.h"

namespace dialflow {

struct Assertion {
  std::string subject = "self";
  std::string predicate;  // like, name, origin, age or a registered one
  std::string value;
  int polarity = 1;
  size_t turn_index = 0;
};

class NliRules {
 public:
  // Built-in patterns:
  //   i (like|love|enjoy) X          like  +1
  //   i (hate|dislike|don't like) X  like  -1
  //   my name is X                   name
  //   i am from X                    origin
  //   i am N years old               age
  NliRules();

  // Single-valued predicate triggered by a phrase, e.g. ("job", "i work as").
  void add_exclusive(const std::string& predicate, const std::string& trigger);

  // Built-ins plus lines "predicate<TAB>trigger phrase" ('#' comments).
  static NliRules with_file(const std::filesystem::path& path);

  bool exclusive(std::string_view predicate) const;
  std::vector<Assertion> extract(std::string_view text, size_t turn_index = 0) const;

 private:
  struct Trigger {
    Words phrase;
    std::string predicate;
    int polarity;
  };
  std::vector<Trigger> triggers_;
  std::vector<std::string> exclusive_;
};

struct ConflictResult {
  bool conflict = false;
  std::string explanation;
};

// The bot is whoever speaks after the last history turn; only its turns are
// compared. Conflict: same predicate with opposite polarity on the same
// value, or a single-valued predicate with a different value.
ConflictResult detect_conflict(std::span<const Utterance> history, std::string_view candidate,
                               const NliRules& rules);

}  // namespace dialflow

#endif  // DIALFLOW_SCORING_CONFLICT_H_
