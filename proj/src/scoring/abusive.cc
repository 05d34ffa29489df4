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

#include "dialflow/scoring/abusive.h"

#include <fstream>
#include <stdexcept>

#include "dialflow/core/text.h"

namespace dialflow {

AbusiveLexicon::AbusiveLexicon(std::span<const std::string> words) {
  for (const auto& w : words) {
    const Words t = split_words(w);
    if (t.size() != 1) {
      throw std::invalid_argument("abusive lexicon: entry '" + w + "' is not a single token");
    }
    words_.insert(t.front());
  }
}

AbusiveLexicon AbusiveLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("abusive lexicon: cannot open " + path.string());
  std::vector<std::string> words;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(b, e - b + 1));
    if (split_words(words.back()).size() != 1) {
      throw std::runtime_error("abusive lexicon: " + path.string() + " line " + std::to_string(n) +
                               ": not a single token");
    }
  }
  return AbusiveLexicon(words);
}

bool AbusiveLexicon::contains(std::string_view token) const {
  return words_.find(token) != words_.end();
}

std::optional<std::string> AbusiveLexicon::match(std::string_view text) const {
  if (words_.empty()) return std::nullopt;
  for (const auto& w : split_words(text)) {
    if (contains(w)) return w;
  }
  return std::nullopt;
}

}  // namespace dialflow
