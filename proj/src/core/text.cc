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

#include "dialflow/core/text.h"

#include <array>
#include <stdexcept>

namespace dialflow {

namespace {

const std::array<std::string, special::kCount> kSpecialSpellings = {
    "<pad>", "<bos>", "<eos>", "<sep>", "<fact>", "<spk_a>", "<spk_b>", "<unk>"};

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char to_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

}  // namespace

Words split_words(std::string_view text) {
  Words out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c)) {
      ++i;
      continue;
    }
    if (!is_word_byte(c)) {
      out.emplace_back(1, text[i]);
      ++i;
      continue;
    }
    std::string word;
    while (i < n) {
      const auto d = static_cast<unsigned char>(text[i]);
      if (is_word_byte(d)) {
        word.push_back(to_lower(d));
        ++i;
      } else if (d == '\'' && i + 1 < n &&
                 is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
        word.push_back('\'');
        ++i;
      } else {
        break;
      }
    }
    out.push_back(std::move(word));
  }
  return out;
}

bool is_punctuation(std::string_view word) {
  return word.size() == 1 && !is_word_byte(static_cast<unsigned char>(word[0])) &&
         !is_space_byte(static_cast<unsigned char>(word[0]));
}

std::string detokenize(std::span<const std::string> words) {
  std::string out;
  for (const auto& w : words) {
    const bool attach = w.size() == 1 && (w == "," || w == "." || w == "!" ||
                                          w == "?" || w == ";" || w == ":");
    if (!out.empty() && !attach) out.push_back(' ');
    out += w;
  }
  return out;
}

Vocabulary::Vocabulary() {
  for (TokenId i = 0; i < special::kCount; ++i) {
    id_to_token_.push_back(kSpecialSpellings[i]);
    token_to_id_.emplace(kSpecialSpellings[i], i);
  }
}

Vocabulary::Vocabulary(std::span<const std::string> words) : Vocabulary() {
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("vocabulary: empty word");
    if (!token_to_id_.emplace(w, static_cast<TokenId>(id_to_token_.size())).second) {
      throw std::invalid_argument("vocabulary: duplicate or reserved word '" + w + "'");
    }
    id_to_token_.push_back(w);
  }
}

TokenId Vocabulary::id(std::string_view word) const {
  auto it = token_to_id_.find(std::string(word));
  if (it == token_to_id_.end() || is_special(it->second)) return special::kUnk;
  return it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  auto it = token_to_id_.find(std::string(word));
  return it != token_to_id_.end() && !is_special(it->second);
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<size_t>(id) >= id_to_token_.size()) {
    throw std::out_of_range("vocabulary: token id out of range");
  }
  return id_to_token_[static_cast<size_t>(id)];
}

std::vector<std::string> Vocabulary::words() const {
  return {id_to_token_.begin() + special::kCount, id_to_token_.end()};
}

std::vector<TokenId> Vocabulary::encode(std::span<const std::string> words) const {
  std::vector<TokenId> ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(id(w));
  return ids;
}

Words Vocabulary::decode(std::span<const TokenId> ids) const {
  Words out;
  out.reserve(ids.size());
  for (TokenId t : ids) out.push_back(token(t));
  return out;
}

std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab) {
  const Words words = split_words(text);
  return vocab.encode(words);
}

}  // namespace dialflow
