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

#include "dialflow/core/dialogue.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace dialflow {

using nlohmann::json;

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

}  // namespace

std::string_view speaker_name(Speaker s) { return s == Speaker::kA ? "A" : "B"; }

Speaker parse_speaker(std::string_view name) {
  if (name == "A") return Speaker::kA;
  if (name == "B") return Speaker::kB;
  throw std::invalid_argument("speaker must be \"A\" or \"B\", got \"" +
                              std::string(name) + "\"");
}

CorpusError::CorpusError(size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

void validate(const Dialogue& d) {
  if (d.turns.empty()) throw std::invalid_argument("dialogue '" + d.id + "' has no turns");
  for (size_t i = 0; i < d.turns.size(); ++i) {
    if (is_blank(d.turns[i].text)) {
      throw std::invalid_argument("dialogue '" + d.id + "' turn " + std::to_string(i) +
                                  " has empty text");
    }
    if (i > 0 && d.turns[i].speaker == d.turns[i - 1].speaker) {
      throw std::invalid_argument("dialogue '" + d.id + "' turn " + std::to_string(i) +
                                  ": speakers do not alternate");
    }
  }
}

bool is_valid(const Dialogue& d) noexcept {
  try {
    validate(d);
    return true;
  } catch (...) {
    return false;
  }
}

json to_json(const Dialogue& d) {
  json turns = json::array();
  for (const auto& t : d.turns) {
    turns.push_back({{"speaker", speaker_name(t.speaker)}, {"text", t.text}});
  }
  return {{"id", d.id}, {"facts", d.facts}, {"turns", std::move(turns)}};
}

Dialogue dialogue_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("dialogue must be a JSON object");
  Dialogue d;
  d.id = j.at("id").get<std::string>();
  if (j.contains("facts")) d.facts = j.at("facts").get<std::vector<std::string>>();
  const json& turns = j.at("turns");
  if (!turns.is_array()) throw std::invalid_argument("\"turns\" must be an array");
  for (const auto& t : turns) {
    Utterance u;
    u.speaker = parse_speaker(t.at("speaker").get<std::string>());
    u.text = t.at("text").get<std::string>();
    d.turns.push_back(std::move(u));
  }
  validate(d);
  return d;
}

std::vector<Dialogue> parse_corpus(std::istream& in) {
  std::vector<Dialogue> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    try {
      out.push_back(dialogue_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw CorpusError(line_no, e.what());
    }
  }
  return out;
}

std::vector<Dialogue> parse_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError(0, "cannot open corpus file " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const Dialogue> corpus) {
  for (const auto& d : corpus) out << to_json(d).dump() << '\n';
}

void write_corpus(const std::filesystem::path& path, std::span<const Dialogue> corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write corpus file " + path.string());
  write_corpus(out, corpus);
}

std::string serialize_corpus(std::span<const Dialogue> corpus) {
  std::ostringstream os;
  write_corpus(os, corpus);
  return os.str();
}

Vocabulary build_vocab(std::span<const Dialogue> corpus, size_t cap) {
  if (corpus.empty()) throw std::invalid_argument("build_vocab: empty corpus");
  if (cap < static_cast<size_t>(special::kCount)) {
    throw std::invalid_argument("build_vocab: cap must leave room for the special tokens");
  }
  std::map<std::string, size_t> counts;
  auto count = [&](std::string_view text) {
    for (auto& w : split_words(text)) ++counts[w];
  };
  for (const auto& d : corpus) {
    for (const auto& f : d.facts) count(f);
    for (const auto& t : d.turns) count(t.text);
  }
  std::vector<std::pair<std::string, size_t>> ranked(counts.begin(), counts.end());
  // std::map iteration is already lexicographic, so a stable sort on count
  // keeps the tie-break.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const size_t keep = std::min(ranked.size(), cap - special::kCount);
  std::vector<std::string> words;
  words.reserve(keep);
  for (size_t i = 0; i < keep; ++i) words.push_back(ranked[i].first);
  return Vocabulary(words);
}

void tokenize_dialogue(Dialogue& d, const Vocabulary& vocab) {
  for (auto& t : d.turns) t.tokens = tokenize(t.text, vocab);
}

}  // namespace dialflow
