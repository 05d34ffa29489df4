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

#include "dialflow/postprocess/finalize.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace dialflow {

namespace {

bool word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool attaches_left(char c) {
  return c == ',' || c == '.' || c == '!' || c == '?' || c == ';' || c == ':';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string squash_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (space(c)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

CasingLexicon::CasingLexicon(const std::map<std::string, std::string>& entries) {
  for (const auto& [key, cased] : entries) {
    if (key.empty() || squash_spaces(key) != key) {
      throw std::invalid_argument("casing lexicon: blank or badly spaced key '" + key + "'");
    }
    if (lower(key) != key) throw std::invalid_argument("casing lexicon: key '" + key + "' is not lowercase");
    if (lower(cased) != key) {
      throw std::invalid_argument("casing lexicon: '" + cased + "' is not a recasing of '" + key + "'");
    }
    entries_.emplace_back(key, cased);
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

CasingLexicon CasingLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("casing lexicon: cannot open " + path.string());
  std::map<std::string, std::string> entries;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (squash_spaces(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("casing lexicon: " + path.string() + " line " + std::to_string(n) +
                               ": expected 'lowercase<TAB>Cased Form'");
    }
    entries[line.substr(0, tab)] = line.substr(tab + 1);
  }
  try {
    return CasingLexicon(entries);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string finalize_text(std::string_view text, const CasingLexicon& lexicon) {
  const std::string squashed = squash_spaces(text);
  std::string s;
  for (size_t i = 0; i < squashed.size(); ++i) {
    if (squashed[i] == ' ' && i + 1 < squashed.size() && attaches_left(squashed[i + 1])) continue;
    s.push_back(squashed[i]);
  }

  const std::string low = lower(s);
  for (size_t i = 0; i < s.size();) {
    if (i > 0 && word_char(s[i - 1])) {
      ++i;
      continue;
    }
    size_t step = 1;
    for (const auto& [key, cased] : lexicon.entries()) {
      const size_t e = i + key.size();
      if (e > s.size() || low.compare(i, key.size(), key) != 0) continue;
      if (e < s.size() && word_char(s[e])) continue;
      s.replace(i, key.size(), cased);
      step = key.size();
      break;
    }
    i += step;
  }

  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 'i' && (i == 0 || !word_char(s[i - 1])) && (i + 1 == s.size() || !word_char(s[i + 1]))) {
      s[i] = 'I';
    }
  }
  bool start = true;
  for (size_t i = 0; i < s.size(); ++i) {
    const auto u = static_cast<unsigned char>(s[i]);
    if (start && std::isalpha(u)) {
      s[i] = static_cast<char>(std::toupper(u));
      start = false;
    } else if (start && u >= 0x80) {
      start = false;
    } else if (s[i] == '.' || s[i] == '!' || s[i] == '?') {
      start = i + 1 < s.size() && s[i + 1] == ' ';
    } else if (std::isalnum(u)) {
      start = false;
    }
  }
  return s;
}

}  // namespace dialflow
