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

#ifndef DIALFLOW_POSTPROCESS_FINALIZE_H_
#define DIALFLOW_POSTPROCESS_FINALIZE_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dialflow {

// Lowercase phrase -> cased form, e.g. "new york" -> "New York". A cased
// form may differ from its key only in letter case.
class CasingLexicon {
 public:
  CasingLexicon() = default;
  // Errors: blank or non-lowercase key, cased form that lowercases to
  // something other than its key.
  explicit CasingLexicon(const std::map<std::string, std::string>& entries);

  // TSV lines "lowercase<TAB>Cased Form"; blank and '#' lines skipped.
  static CasingLexicon from_file(const std::filesystem::path& path);

  // Keys, longest first, ties in key order.
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Collapses whitespace, removes spaces before , . ! ? ; :, applies the
// lexicon (case-insensitive, whole words, longest match first), then
// capitalizes standalone "i" and the first letter of each sentence.
// Idempotent.
std::string finalize_text(std::string_view text, const CasingLexicon& lexicon);

}  // namespace dialflow

#endif  // DIALFLOW_POSTPROCESS_FINALIZE_H_
