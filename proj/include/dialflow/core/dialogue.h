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

#ifndef DIALFLOW_CORE_DIALOGUE_H_
#define DIALFLOW_CORE_DIALOGUE_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dialflow/core/text.h"
#include "json.hpp"

namespace dialflow {

enum class Speaker { kA, kB };

inline Speaker other(Speaker s) { return s == Speaker::kA ? Speaker::kB : Speaker::kA; }
inline TokenId speaker_token(Speaker s) {
  return s == Speaker::kA ? special::kSpeakerA : special::kSpeakerB;
}
std::string_view speaker_name(Speaker s);
Speaker parse_speaker(std::string_view name);

struct Utterance {
  Speaker speaker = Speaker::kA;
  std::string text;
  // Filled by tokenize_dialogue(); empty until then.
  std::vector<TokenId> tokens;

  bool operator==(const Utterance&) const = default;
};

// turns[..-1] is the context, turns.back() the response, facts the grounding
// knowledge.
struct Dialogue {
  std::string id;
  std::vector<std::string> facts;
  std::vector<Utterance> turns;

  bool operator==(const Dialogue&) const = default;
};

// Thrown for malformed corpus input. line() is 1-based, 0 when unknown.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(size_t line, const std::string& what);
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Throws std::invalid_argument naming the first violated invariant:
// at least one turn, non-blank text, strictly alternating speakers.
void validate(const Dialogue& d);
bool is_valid(const Dialogue& d) noexcept;

nlohmann::json to_json(const Dialogue& d);
Dialogue dialogue_from_json(const nlohmann::json& j);

std::vector<Dialogue> parse_corpus(std::istream& in);
std::vector<Dialogue> parse_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, std::span<const Dialogue> corpus);
void write_corpus(const std::filesystem::path& path, std::span<const Dialogue> corpus);
std::string serialize_corpus(std::span<const Dialogue> corpus);

// Most frequent words over all turns and facts, capped at `cap` entries in
// total (specials included); ties go to the lexicographically smaller word.
Vocabulary build_vocab(std::span<const Dialogue> corpus, size_t cap);

// Fills Utterance::tokens for every turn.
void tokenize_dialogue(Dialogue& d, const Vocabulary& vocab);

}  // namespace dialflow

#endif  // DIALFLOW_CORE_DIALOGUE_H_
