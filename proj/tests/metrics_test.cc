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

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include <gtest/gtest.h>

#include "dialflow/core/text.h"
#include "dialflow/metrics/embedding_table.h"
#include "dialflow/metrics/metrics.h"
#include "test_support.h"

namespace dialflow {
namespace {

Words W(const char* s) { return split_words(s); }

TEST(BleuTest, HandExamples) {
  EXPECT_DOUBLE_EQ(bleu(W("a b c d e"), W("a b c d e")), 1.0);
  EXPECT_DOUBLE_EQ(bleu(W("a b c d"), W("e f g h")), 0.0);
  EXPECT_DOUBLE_EQ(bleu(W("the the the"), W("the cat")), 0.0);
  // 1-gram 2/2, max order 2: bigram 1/1; ref longer: bp = exp(1 - 3/2)
  EXPECT_NEAR(bleu(W("a b"), W("a b c")), std::exp(1.0 - 1.5), 1e-12);
  EXPECT_THROW(bleu(Words{}, W("a")), std::invalid_argument);
}

TEST(MeteorTest, HandExamples) {
  EXPECT_NEAR(meteor_lite(W("a b c"), W("a b c")), 1.0 - 0.5 / 27.0, 1e-12);
  const double fmean = 0.5 / (0.9 * 1.0 + 0.1 * 0.5);
  EXPECT_NEAR(meteor_lite(W("the cat sat"), W("the cat sat on the mat")), fmean * (1 - 0.5 / 27.0), 1e-12);
  EXPECT_DOUBLE_EQ(meteor_lite(W("x y"), W("a b")), 0.0);
  EXPECT_THROW(meteor_lite(W("a"), Words{}), std::invalid_argument);
}

TEST(MeteorTest, AlignmentPrefersFewerChunks) {
  // "a b" can align to either occurrence; the contiguous one gives one chunk
  const auto al = meteor_align(W("a b"), W("a x a b"));
  EXPECT_EQ(al.matches, 2u);
  EXPECT_EQ(al.chunks, 1u);
  ASSERT_TRUE(al.hyp_to_ref[0].has_value());
  EXPECT_EQ(*al.hyp_to_ref[0], 2u);
}

TEST(MeteorTest, ChunkPenaltyOnReordering) {
  // m = 3, chunks = 3 after reversing
  const double p = meteor_lite(W("c b a"), W("a b c"));
  EXPECT_NEAR(p, 1.0 * (1 - 0.5 * 1.0), 1e-12);
}

EmbeddingTable one_hot(const std::vector<std::string>& words) {
  std::map<std::string, Eigen::VectorXd> m;
  for (size_t i = 0; i < words.size(); ++i) {
    m[words[i]] = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(i));
  }
  return EmbeddingTable::from_vectors(m);
}

// Enumerates every maximal-match alignment of short sentences built from a
// three-word alphabet, so repeated words are common.
size_t brute_min_chunks(const Words& hyp, const Words& ref) {
  size_t max_matches = 0;
  std::map<std::string, std::pair<size_t, size_t>> counts;
  for (const auto& w : hyp) ++counts[w].first;
  for (const auto& w : ref) ++counts[w].second;
  for (const auto& [w, c] : counts) max_matches += std::min(c.first, c.second);
  size_t best = SIZE_MAX;
  std::vector<long> map(hyp.size(), -1);
  std::vector<bool> used(ref.size(), false);
  std::function<void(size_t, size_t)> rec = [&](size_t i, size_t matched) {
    if (i == hyp.size()) {
      if (matched != max_matches) return;
      size_t chunks = 0;
      for (size_t k = 0; k < hyp.size(); ++k) {
        if (map[k] < 0) continue;
        if (k == 0 || map[k - 1] < 0 || map[k - 1] + 1 != map[k]) ++chunks;
      }
      best = std::min(best, chunks);
      return;
    }
    rec(i + 1, matched);
    for (size_t j = 0; j < ref.size(); ++j) {
      if (used[j] || ref[j] != hyp[i]) continue;
      used[j] = true;
      map[i] = static_cast<long>(j);
      rec(i + 1, matched + 1);
      map[i] = -1;
      used[j] = false;
    }
  };
  rec(0, 0);
  return max_matches == 0 ? 0 : best;
}

TEST(MeteorProperty, ChunksMatchExhaustiveEnumeration) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto hyp = split_words(testing::random_sentence(rng, 1, 7, 3));
    const auto ref = split_words(testing::random_sentence(rng, 1, 7, 3));
    const auto a = meteor_align(hyp, ref);
    ASSERT_TRUE(a.exhaustive);
    ASSERT_EQ(a.chunks, brute_min_chunks(hyp, ref)) << detokenize(hyp) << " | " << detokenize(ref);
    size_t matched = 0;
    for (size_t i = 0; i < hyp.size(); ++i) {
      if (!a.hyp_to_ref[i]) continue;
      ++matched;
      ASSERT_EQ(ref[*a.hyp_to_ref[i]], hyp[i]);
    }
    ASSERT_EQ(matched, a.matches);
  }
}

TEST(EmbedTest, HandExamples) {
  const auto t = one_hot({"a", "b", "c"});
  EXPECT_NEAR(greedy_embed_score(W("a b"), W("b c"), t), 0.5, 1e-12);
  EXPECT_NEAR(greedy_embed_score(W("a b c"), W("a b c"), t), 1.0, 1e-12);
  EXPECT_NEAR(greedy_embed_score(W("a"), W("c"), t), 0.0, 1e-12);
}

// With one-hot vectors and distinct words, greedy matching is set overlap F1.
TEST(EmbedTest, OneHotMatchesSetOverlapOracle) {
  std::vector<std::string> vocab;
  for (int i = 0; i < 12; ++i) vocab.push_back("w" + std::to_string(i));
  const auto table = one_hot(vocab);
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto pick = [&] {
      std::vector<std::string> out;
      for (const auto& w : vocab) {
        if (rng.bernoulli(0.4)) out.push_back(w);
      }
      if (out.empty()) out.push_back(vocab[rng.uniform_int(vocab.size())]);
      return out;
    };
    const auto h = pick(), r = pick();
    EXPECT_NEAR(greedy_embed_score(h, r, table), testing::unigram_f1(h, r), 1e-12);
  }
}

TEST(MetricsProperty, RangeIdentityAndRelabeling) {
  Rng rng(11);
  const auto table = EmbeddingTable::hashed();
  for (int trial = 0; trial < 300; ++trial) {
    const auto h = split_words(testing::random_sentence(rng, 1, 12, 6));
    const auto r = split_words(testing::random_sentence(rng, 1, 12, 6));
    for (double v : {bleu(h, r), meteor_lite(h, r), greedy_embed_score(h, r, table)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
    EXPECT_DOUBLE_EQ(bleu(h, h), 1.0);
    MeteorParams no_penalty;
    no_penalty.gamma = 0.0;
    EXPECT_NEAR(meteor_lite(h, h, no_penalty), 1.0, 1e-12);
    EXPECT_NEAR(greedy_embed_score(h, h, table), 1.0, 1e-12);
    // consistent relabeling w_k -> z_k leaves bleu and meteor unchanged
    auto relabel = [](Words w) {
      for (auto& x : w) x[0] = 'z';
      return w;
    };
    EXPECT_DOUBLE_EQ(bleu(relabel(h), relabel(r)), bleu(h, r));
    EXPECT_DOUBLE_EQ(meteor_lite(relabel(h), relabel(r)), meteor_lite(h, r));
  }
}

TEST(MetricsTest, MetricByName) {
  const auto table = EmbeddingTable::hashed();
  EXPECT_DOUBLE_EQ(metric_by_name("bleu")(W("a b"), W("a b")), 1.0);
  EXPECT_NO_THROW(metric_by_name("embed", &table));
  EXPECT_THROW(metric_by_name("embed"), std::invalid_argument);
  EXPECT_THROW(metric_by_name("rouge"), std::invalid_argument);
}

TEST(EmbeddingTableTest, HashedIsDeterministicUnitLength) {
  const auto a = EmbeddingTable::hashed(16, 4), b = EmbeddingTable::hashed(16, 4);
  EXPECT_EQ(a.vector("river"), b.vector("river"));
  EXPECT_NEAR(a.vector("river").norm(), 1.0, 1e-12);
  EXPECT_NE(a.vector("river"), a.vector("lake"));
}

TEST(EmbeddingTableTest, FromFileRejectsRaggedLines) {
  const auto dir = testing::scratch_dir("emb");
  {
    std::ofstream(dir / "ok.txt") << "cat 1 0\ndog 0 1\n";
    std::ofstream(dir / "bad.txt") << "cat 1 0\ndog 0\n";
  }
  const auto t = EmbeddingTable::from_file(dir / "ok.txt");
  EXPECT_EQ(t.dim(), 2u);
  EXPECT_NEAR(cosine(t.vector("cat"), t.vector("dog")), 0.0, 1e-12);
  EXPECT_THROW(EmbeddingTable::from_file(dir / "bad.txt"), std::runtime_error);
}

}  // namespace
}  // namespace dialflow
