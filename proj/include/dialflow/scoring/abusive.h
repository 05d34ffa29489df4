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

#ifndef DIALFLOW_SCORING_ABUSIVE_H_
#define DIALFLOW_SCORING_ABUSIVE_H_

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace dialflow {

// Token-level lexicon: "ass" does not match "class".
class AbusiveLexicon {
 public:
  AbusiveLexicon() = default;
  // Entries are lowercased. Errors: an entry that is not a single token.
  explicit AbusiveLexicon(std::span<const std::string> words);

  // One token per line; blank lines and lines starting with '#' skipped.
  static AbusiveLexicon from_file(const std::filesystem::path& path);

  bool contains(std::string_view token) const;
  // First lexicon token found in text, if any.
  std::optional<std::string> match(std::string_view text) const;
  bool flags(std::string_view text) const { return match(text).has_value(); }

  size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

}  // namespace dialflow

#endif  // DIALFLOW_SCORING_ABUSIVE_H_
