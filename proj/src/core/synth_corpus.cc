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

#include "dialflow/core/synth_corpus.h"

#include <stdexcept>

#include "dialflow/core/rng.h"

namespace dialflow {

namespace {

const std::vector<SynthTopic>& topics() {
  static const std::vector<SynthTopic> kTopics = {
      {"music",
       {"guitar", "piano", "jazz", "concert", "song", "band", "drums", "album", "singer",
        "melody"},
       {"i play the {0} .", "the {0} sounds lovely .", "we heard the {0} live ."},
       4},
      {"sports",
       {"soccer", "basketball", "team", "coach", "goal", "stadium", "player", "match",
        "league", "score"},
       {"our {0} won again .", "i watch the {0} weekly .", "the {0} trains hard ."},
       2},
      {"food",
       {"pizza", "pasta", "cheese", "recipe", "kitchen", "soup", "bread", "chef", "spice",
        "dessert"},
       {"i cook the {0} .", "the {0} tastes great .", "we ate {0} for dinner ."},
       5},
      {"travel",
       {"beach", "mountain", "flight", "hotel", "island", "passport", "train", "city", "map",
        "luggage"},
       {"i booked the {0} .", "the {0} looked beautiful .", "we visited the {0} abroad ."},
       7},
      {"movies",
       {"film", "actor", "director", "cinema", "comedy", "thriller", "scene", "screen",
        "popcorn", "sequel"},
       {"i watched the {0} twice .", "the {0} was so dramatic .", "that {0} won awards ."},
       6},
      {"pets",
       {"dog", "cat", "puppy", "kitten", "leash", "vet", "parrot", "hamster", "fish",
        "collar"},
       {"i feed the {0} .", "the {0} is so cute .", "we walked the {0} outside ."},
       0},
      {"books",
       {"novel", "author", "library", "poem", "chapter", "story", "poetry", "magazine",
        "fiction", "page"},
       {"i read the {0} slowly .", "the {0} was well written .", "she wrote a {0} ."},
       3},
      {"weather",
       {"rain", "snow", "sun", "storm", "cloud", "wind", "winter", "summer", "thunder",
        "forecast"},
       {"the {0} is coming .", "we expect {0} tomorrow .", "the {0} feels cold ."},
       1},
  };
  return kTopics;
}

constexpr std::string_view kFactTemplate = "the {0} is famous for the {1} .";

std::string fill_slots(std::string_view tmpl, const std::string& a, const std::string& b) {
  std::string out;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
      out += tmpl[i + 1] == '0' ? a : b;
      i += 2;
    } else {
      out.push_back(tmpl[i]);
    }
  }
  return out;
}

std::pair<std::string, std::string> two_words(const SynthTopic& t, Rng& rng) {
  const size_t n = t.lexicon.size();
  const size_t i = rng.uniform_int(n);
  size_t j = rng.uniform_int(n - 1);
  if (j >= i) ++j;
  return {t.lexicon[i], t.lexicon[j]};
}

}  // namespace

std::span<const SynthTopic> synth_topics() { return topics(); }

std::optional<size_t> synth_topic_of(std::string_view word) {
  const auto& ts = topics();
  for (size_t i = 0; i < ts.size(); ++i) {
    for (const auto& w : ts[i].lexicon) {
      if (w == word) return i;
    }
  }
  return std::nullopt;
}

std::vector<Dialogue> gen_synth_corpus(uint64_t seed, size_t n_dialogues) {
  if (n_dialogues == 0) throw std::invalid_argument("gen_synth_corpus: n_dialogues must be >= 1");
  const auto& ts = topics();
  Rng rng(mix_seed(seed, 0x5157));
  std::vector<Dialogue> corpus;
  corpus.reserve(n_dialogues);
  for (size_t d = 0; d < n_dialogues; ++d) {
    Dialogue dlg;
    dlg.id = "synth-" + std::to_string(seed) + "-" + std::to_string(d);
    size_t topic = rng.uniform_int(ts.size());
    const size_t n_facts = 1 + rng.uniform_int(2);
    for (size_t f = 0; f < n_facts; ++f) {
      auto [a, b] = two_words(ts[topic], rng);
      dlg.facts.push_back(fill_slots(kFactTemplate, a, b));
    }
    const auto n_turns = static_cast<size_t>(rng.uniform_range(4, 10));
    Speaker speaker = Speaker::kA;
    for (size_t t = 0; t < n_turns; ++t) {
      if (t > 0 && rng.bernoulli(kSynthTopicShift)) topic = ts[topic].successor;
      const auto& grammar = ts[topic].grammar;
      const auto& tmpl = grammar[rng.uniform_int(grammar.size())];
      const auto& word = ts[topic].lexicon[rng.uniform_int(ts[topic].lexicon.size())];
      dlg.turns.push_back(Utterance{speaker, fill_slots(tmpl, word, word), {}});
      speaker = other(speaker);
    }
    corpus.push_back(std::move(dlg));
  }
  return corpus;
}

}  // namespace dialflow
