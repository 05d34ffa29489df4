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

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dialflow/core/dialogue.h"
#include "dialflow/core/synth_corpus.h"
#include "dialflow/model/checkpoint.h"
#include "json.hpp"
#include "test_support.h"

namespace dialflow {
namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI through the shell, capturing stdout (stderr discarded unless
// redirected by the caller).
Run run(const std::string& args) {
  const std::string cmd = std::string(DIALFLOW_BIN) + " " + args;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<nlohmann::json> jsonl(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

TEST(CliTest, UsageAndExitCodes) {
  EXPECT_EQ(run("2>&1").code, 2);
  EXPECT_NE(run("2>&1").out.find("Subcommands"), std::string::npos);
  EXPECT_EQ(run("gradcheck --bogus 2>/dev/null").code, 2);
  EXPECT_EQ(run("frobnicate 2>/dev/null").code, 2);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("train --help").code, 0);
  EXPECT_EQ(run("evaluate --pred /nonexistent --ref /nonexistent 2>/dev/null").code, 2);
}

TEST(CliTest, GradcheckPasses) {
  const auto r = run("gradcheck --sample 20");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("max relative error"), std::string::npos);
}

TEST(CliTest, AugmentWritesValidDialogues) {
  const auto dir = testing::scratch_dir("cli");
  write_corpus(dir / "c.jsonl", gen_synth_corpus(1, 10));
  const auto r = run("augment --corpus " + (dir / "c.jsonl").string() + " --n 50 --seed 3 --p-truncate 0.5 2>/dev/null");
  ASSERT_EQ(r.code, 0);
  const auto lines = jsonl(r.out);
  ASSERT_EQ(lines.size(), 50u);
  for (const auto& j : lines) EXPECT_TRUE(is_valid(dialogue_from_json(j)));
  EXPECT_EQ(run("augment --corpus " + (dir / "c.jsonl").string() + " --n 50 --seed 3 --p-truncate 0.5 2>/dev/null").out,
            r.out);
  EXPECT_EQ(run("augment --corpus " + (dir / "c.jsonl").string() + " --p-truncate 0.9 --p-concat 0.9 2>/dev/null").code, 1);
}

TEST(CliTest, EnsembleSelectsPerLine) {
  const auto dir = testing::scratch_dir("cli");
  std::ofstream(dir / "in.jsonl") << R"({"candidates": ["a b c", "a b d", "x y z"]})" << "\n"
                                  << R"({"candidates": ["only"]})" << "\n";
  const auto r = run("ensemble --metric bleu --input " + (dir / "in.jsonl").string());
  ASSERT_EQ(r.code, 0);
  const auto out = jsonl(r.out);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0]["selected"], "a b c");
  EXPECT_EQ(out[0]["scores"].size(), 3u);
  EXPECT_EQ(out[1]["selected"], "only");
  std::ofstream(dir / "bad.jsonl") << "{\"cands\": []}\n";
  EXPECT_EQ(run("ensemble --input " + (dir / "bad.jsonl").string() + " 2>/dev/null").code, 1);
}

TEST(CliTest, EvaluateReportsJson) {
  const auto dir = testing::scratch_dir("cli");
  std::ofstream(dir / "p.txt") << "a b c\nhello there\n";
  std::ofstream(dir / "r.txt") << "a b c\nhello there\n";
  const auto r = run("evaluate --pred " + (dir / "p.txt").string() + " --ref " + (dir / "r.txt").string() +
                     " --metrics bleu --json " + (dir / "rep.json").string());
  ASSERT_EQ(r.code, 0);
  std::ifstream in(dir / "rep.json");
  const auto rep = nlohmann::json::parse(in);
  EXPECT_EQ(rep["count"], 2);
  EXPECT_DOUBLE_EQ(rep["means"]["bleu"].get<double>(), 1.0);
}

TEST(CliTest, TrainThenChat) {
  const auto dir = testing::scratch_dir("cli");
  const auto ckpt = (dir / "m.dpm").string();
  const auto r = run("train --synth 20 --epochs 1 --d-model 16 --d-ff 32 --layers 1 --out " + ckpt +
                     " --history " + (dir / "h.json").string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("epoch   1"), std::string::npos);
  EXPECT_EQ(load_checkpoint(ckpt).config().d_model, 16);
  EXPECT_EQ(run("train --epochs 1 --out " + ckpt + " 2>/dev/null").code, 2);

  const std::string data = DIALFLOW_DATA;
  const auto chat = run("chat --checkpoint " + ckpt + " --log " + (dir / "ev.jsonl").string() +
                        " --abusive-lexicon " + data + "/abusive.txt --fallbacks " + data +
                        "/fallbacks.txt 2>/dev/null <<'EOF'\ni play the guitar .\nthe rain is coming .\nEOF");
  ASSERT_EQ(chat.code, 0);
  size_t replies = 0;
  for (size_t pos = 0; (pos = chat.out.find("bot> ", pos)) != std::string::npos; ++pos) ++replies;
  EXPECT_EQ(replies, 2u);
}

}  // namespace
}  // namespace dialflow
