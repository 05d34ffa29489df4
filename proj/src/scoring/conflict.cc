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

#include "dialflow/scoring/conflict.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace dialflow {

namespace {

constexpr size_t kMaxValueWords = 4;

bool stops_value(const std::string& w) {
  static const char* const kStops[] = {"and", "but", "because", "so", "or", "since", "though",
                                       "too", "very", "when", "if", "than"};
  if (is_punctuation(w)) return true;
  return std::find(std::begin(kStops), std::end(kStops), w) != std::end(kStops);
}

bool is_number(const std::string& w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string join(const Words& w, size_t b, size_t e) {
  std::string s;
  for (size_t i = b; i < e; ++i) {
    if (i > b) s += ' ';
    s += w[i];
  }
  return s;
}

}  // namespace

NliRules::NliRules() {
  for (const char* verb : {"like", "love", "enjoy", "really like", "really love"}) {
    triggers_.push_back({split_words(std::string("i ") + verb), "like", +1});
  }
  for (const char* verb : {"hate", "dislike", "don't like", "do not like", "really hate"}) {
    triggers_.push_back({split_words(std::string("i ") + verb), "like", -1});
  }
  add_exclusive("name", "my name is");
  add_exclusive("origin", "i am from");
  add_exclusive("origin", "i'm from");
  exclusive_.push_back("age");
}

void NliRules::add_exclusive(const std::string& predicate, const std::string& trigger) {
  Words phrase = split_words(trigger);
  if (predicate.empty() || phrase.empty()) {
    throw std::invalid_argument("nli rules: empty predicate or trigger");
  }
  if (predicate == "like") throw std::invalid_argument("nli rules: 'like' is not single-valued");
  triggers_.push_back({std::move(phrase), predicate, +1});
  if (!exclusive(predicate)) exclusive_.push_back(predicate);
  std::stable_sort(triggers_.begin(), triggers_.end(),
                   [](const Trigger& a, const Trigger& b) { return a.phrase.size() > b.phrase.size(); });
}

NliRules NliRules::with_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("nli rules: cannot open " + path.string());
  NliRules rules;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("nli rules: " + path.string() + " line " + std::to_string(n) +
                               ": expected 'predicate<TAB>trigger'");
    }
    try {
      rules.add_exclusive(line.substr(0, tab), line.substr(tab + 1));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  return rules;
}

bool NliRules::exclusive(std::string_view predicate) const {
  return std::find(exclusive_.begin(), exclusive_.end(), predicate) != exclusive_.end();
}

std::vector<Assertion> NliRules::extract(std::string_view text, size_t turn_index) const {
  const Words w = split_words(text);
  std::vector<Assertion> out;
  for (size_t i = 0; i < w.size(); ++i) {
    // i am N years old
    const bool i_am = w[i] == "i'm" || (w[i] == "i" && i + 1 < w.size() && w[i + 1] == "am");
    const size_t num = i + (w[i] == "i'm" ? 1 : 2);
    if (i_am && num + 1 < w.size() && is_number(w[num]) && w[num + 1] == "years") {
      out.push_back({"self", "age", w[num], +1, turn_index});
      continue;
    }
    for (const auto& t : triggers_) {
      if (i + t.phrase.size() > w.size() || !std::equal(t.phrase.begin(), t.phrase.end(), w.begin() + static_cast<long>(i))) {
        continue;
      }
      size_t b = i + t.phrase.size();
      while (b < w.size() && (w[b] == "the" || w[b] == "a" || w[b] == "an")) ++b;
      size_t e = b;
      while (e < w.size() && e - b < kMaxValueWords && !stops_value(w[e])) ++e;
      if (e > b) out.push_back({"self", t.predicate, join(w, b, e), t.polarity, turn_index});
      break;
    }
  }
  return out;
}

ConflictResult detect_conflict(std::span<const Utterance> history, std::string_view candidate,
                               const NliRules& rules) {
  if (history.empty()) return {};
  const Speaker bot = other(history.back().speaker);
  const auto mine = rules.extract(candidate);
  if (mine.empty()) return {};
  for (size_t t = 0; t < history.size(); ++t) {
    if (history[t].speaker != bot) continue;
    for (const auto& h : rules.extract(history[t].text, t)) {
      for (const auto& c : mine) {
        if (h.predicate != c.predicate || h.subject != c.subject) continue;
        const bool clash = rules.exclusive(c.predicate) ? h.value != c.value
                                                       : h.value == c.value && h.polarity != c.polarity;
        if (clash) {
          return {true, c.predicate + ": '" + c.value + "' contradicts '" + h.value + "' (turn " +
                            std::to_string(t + 1) + ")"};
        }
      }
    }
  }
  return {};
}

}  // namespace dialflow
