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

#ifndef DIALFLOW_CORE_TEXT_H_
#define DIALFLOW_CORE_TEXT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dialflow {

using TokenId = int32_t;
using Words = std::vector<std::string>;

// Reserved ids; every vocabulary places these at 0..7.
namespace special {
inline constexpr TokenId kPad = 0;
inline constexpr TokenId kBos = 1;
inline constexpr TokenId kEos = 2;
inline constexpr TokenId kSep = 3;
inline constexpr TokenId kFact = 4;
inline constexpr TokenId kSpeakerA = 5;
inline constexpr TokenId kSpeakerB = 6;
inline constexpr TokenId kUnk = 7;
inline constexpr TokenId kCount = 8;
}  // namespace special

inline bool is_special(TokenId id) { return id >= 0 && id < special::kCount; }

// Lowercases, splits on whitespace and splits punctuation into separate
// tokens. Apostrophes between word characters stay inside the word
// ("don't"). Bytes >= 0x80 are treated as word characters.
Words split_words(std::string_view text);

// Joins words with single spaces, attaching closing punctuation to the
// preceding word.
std::string detokenize(std::span<const std::string> words);

bool is_punctuation(std::string_view word);

// Immutable token <-> id mapping.
class Vocabulary {
 public:
  Vocabulary();

  // Words in id order after the specials. Duplicates or reserved spellings
  // are rejected.
  explicit Vocabulary(std::span<const std::string> words);

  size_t size() const { return id_to_token_.size(); }

  // UNK for unseen words.
  TokenId id(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& token(TokenId id) const;

  // Non-special entries in id order.
  std::vector<std::string> words() const;

  std::vector<TokenId> encode(std::span<const std::string> words) const;
  Words decode(std::span<const TokenId> ids) const;

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab);

}  // namespace dialflow

#endif  // DIALFLOW_CORE_TEXT_H_
