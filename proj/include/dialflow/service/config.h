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

#ifndef DIALFLOW_SERVICE_CONFIG_H_
#define DIALFLOW_SERVICE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace dialflow {

struct ServiceConfig {
  std::string checkpoint;       // empty: no model, message posts answer 503
  std::string abusive_lexicon;  // one token per line
  std::string casing_lexicon;   // TSV
  std::string nli_rules;        // extra single-valued predicates, TSV
  std::string fallbacks;        // one response per line
  std::string embeddings;       // "word v1 .. vd" lines; hashed vectors when empty
  std::string log = "dialflow_events.jsonl";
  std::string ui_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  size_t n_candidates = 8;
  double top_p = 0.9;
  int max_len = 24;
  uint64_t seed = 1;
  size_t k = 10;
  double alpha = 0.7;

  // Errors (std::invalid_argument): unknown key, unparsable value.
  void set(std::string_view key, std::string_view value);

  // "key = value" lines; blank lines and '#' comments skipped.
  // Errors carry the line number.
  void merge_file(const std::filesystem::path& path);

  void validate() const;
};

}  // namespace dialflow

#endif  // DIALFLOW_SERVICE_CONFIG_H_
