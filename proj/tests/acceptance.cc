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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and budgets are fixed below.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dialflow/augment/augment.h"
#include "dialflow/core/synth_corpus.h"
#include "dialflow/ensemble/ensemble.h"
#include "dialflow/model/checkpoint.h"
#include "dialflow/model/generate.h"
#include "dialflow/model/grad_check.h"
#include "dialflow/model/train.h"
#include "dialflow/postprocess/finalize.h"
#include "dialflow/scoring/abusive.h"
#include "dialflow/scoring/cascade.h"
#include "dialflow/scoring/conflict.h"
#include "httplib.h"
#include "test_support.h"

namespace df = dialflow;
namespace dt = dialflow::testing;
using nlohmann::json;

namespace {

constexpr double kScoreTol = 1e-12;
constexpr double kEnsembleBudgetS = 10.0;
constexpr double kSpearmanMin = 0.8;
constexpr double kGradTol = 1e-4;
constexpr double kGradEps = 1e-5;
constexpr double kGradBudgetS = 60.0;
constexpr double kUniformRelTol = 1e-9;
constexpr double kLossRatioMax = 0.60;
constexpr double kRecallFactor = 2.0;
constexpr size_t kRecallK = 20;
constexpr double kTrainBudgetS = 15 * 60.0;
constexpr double kSigmas = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<df::Words> words_of(const std::vector<std::string>& texts) {
  std::vector<df::Words> out;
  for (const auto& t : texts) out.push_back(df::split_words(t));
  return out;
}

// ---- 1

Outcome ensemble_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const df::Metric meteor = df::metric_by_name("meteor");
  df::Rng rng(1001);
  size_t mismatches = 0;
  for (int set = 0; set < 1000; ++set) {
    const size_t n = 1 + rng.uniform_int(10);
    std::vector<std::string> texts;
    for (size_t i = 0; i < n; ++i) texts.push_back(dt::random_sentence(rng, 1, 10, 6));
    const auto c = words_of(texts);
    const auto got = df::ensemble_select(c, meteor);
    const auto want = dt::ensemble_reference(c, meteor);
    bool ok = got.selected_index == want.selected && got.scores.size() == n;
    for (size_t i = 0; ok && i < n; ++i) ok = std::abs(got.scores[i] - want.scores[i]) <= kScoreTol;
    mismatches += !ok;
  }
  const double s = seconds_since(t0);
  return {mismatches == 0 && s < kEnsembleBudgetS, fmt("1000 sets, %zu mismatches, %.2fs", mismatches, s)};
}

// ---- 2

Outcome table_ranking() {
  const std::vector<std::string> cands = {
      "the warriors played the nba finals at the cow palace because the oakland arena was booked.",
      "the golden state warriors played the home games in the 1975 nba finals at the cow palace.",
      "the cow palace was the place to watch games in 1975.",
      "the golden state warriors played at the cow palace because the oakland arena was booked.",
      "the golden state warriors played in 1975 at the cow palace because the oakland arena was booked."};
  const auto gt = df::split_words(
      "in 1975 the golden state warriors had to play at the cow palace because their arena was booked.");
  const std::vector<double> published = {0.592, 0.591, 0.540, 0.808, 0.811};
  const auto c = words_of(cands);
  std::vector<double> ours;
  for (const auto& w : c) ours.push_back(df::meteor_lite(w, gt));
  const double rho = dt::spearman(ours, published);
  const auto sel = df::ensemble_select(c, df::metric_by_name("meteor"));
  const bool pick_ok = sel.selected_index == 4 || sel.selected_index == 3;
  return {rho >= kSpearmanMin && pick_ok,
          fmt("spearman %.3f, GT meteor [%.3f %.3f %.3f %.3f %.3f], selected example %zu", rho, ours[0], ours[1],
              ours[2], ours[3], ours[4], sel.selected_index + 1)};
}

// ---- 3

Outcome gradient_check() {
  df::GradCheckOptions o;
  o.eps = kGradEps;
  const auto r = df::grad_check_micro(o);
  return {r.max_rel_error <= kGradTol && r.seconds < kGradBudgetS,
          fmt("max rel error %.2e (%s), %zu coordinates, %.2fs", r.max_rel_error, r.worst_tensor.c_str(),
              r.coordinates, r.seconds)};
}

// ---- 4

df::Dialogue random_dialogue(df::Rng& rng, const df::Vocabulary& vocab, size_t idx) {
  const auto words = vocab.words();
  df::Dialogue d;
  d.id = "r" + std::to_string(idx);
  if (rng.bernoulli(0.5)) d.facts.push_back(words[rng.uniform_int(words.size())] + " " + words[rng.uniform_int(words.size())]);
  const size_t turns = 2 + rng.uniform_int(4);
  for (size_t t = 0; t < turns; ++t) {
    std::string text;
    const size_t len = 1 + rng.uniform_int(6);
    for (size_t i = 0; i < len; ++i) text += (i ? " " : "") + words[rng.uniform_int(words.size())];
    d.turns.push_back({t % 2 ? df::Speaker::kB : df::Speaker::kA, text, {}});
  }
  return d;
}

Outcome loss_identities() {
  df::Rng rng(404);
  size_t sum_bad = 0, uniform_bad = 0;
  double worst = 0.0;
  for (size_t i = 0; i < 100; ++i) {
    const auto init = i % 2 ? df::ModelParams::Init::kRandom : df::ModelParams::Init::kUniformLogits;
    const auto m = dt::random_model(1 + i, init);
    const auto d = random_dialogue(rng, m.vocab(), i);
    for (size_t n = 2; n <= d.turns.size(); ++n) {
      const auto lb = m.compute_losses(d, n);
      sum_bad += lb.total != lb.flow + lb.gen + lb.bow;
    }
    if (init != df::ModelParams::Init::kUniformLogits) continue;
    const double log_v = std::log(static_cast<double>(m.config().vocab_size));
    df::ObjectiveOptions oo;
    oo.include_grounded = true;
    const auto r = m.objective(d, oo, nullptr);
    const double gen_want = static_cast<double>(r.gen_tokens) * log_v;
    const double kg_want = static_cast<double>(r.grounded_tokens) * log_v;
    const std::span<const df::Utterance> ctx(d.turns.data(), d.turns.size() - 1);
    const double kg = m.kg_lm_loss(d.facts, ctx, d.turns.back());
    const double words = static_cast<double>(df::tokenize(d.turns.back().text, m.vocab()).size());
    for (auto [got, want] : {std::pair{r.sum.gen, gen_want}, std::pair{r.grounded, kg_want},
                             std::pair{kg, (words + 1) * log_v}}) {
      const double rel = std::abs(got - want) / want;
      worst = std::max(worst, rel);
      uniform_bad += rel > kUniformRelTol;
    }
  }
  return {sum_bad == 0 && uniform_bad == 0,
          fmt("100 inputs: %zu inexact totals, %zu uniform-init misses (worst rel %.1e)", sum_bad, uniform_bad, worst)};
}

// ---- 5

Outcome training(const std::filesystem::path& ckpt_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = df::gen_synth_corpus(1, 500);
  df::TrainOptions opts;
  opts.on_epoch = [](const df::EpochStats& s) {
    std::fprintf(stderr, "  epoch %2d total %.4f flow %.4f gen %.4f bow %.4f (%.1fs)\n", s.epoch, s.mean.total,
                 s.mean.flow, s.mean.gen, s.mean.bow, s.seconds);
  };
  const auto result = df::train(corpus, df::ModelConfig{}, opts);
  const double train_s = seconds_since(t0);
  df::save_checkpoint(result.model, ckpt_out);
  const auto& first = result.history.front().mean;
  const auto& last = result.history.back().mean;
  const double ratio = last.total / first.total;
  const auto recall = df::bow_recall(result.model, df::gen_synth_corpus(2, 100), kRecallK);
  const bool ok = result.history.size() == 20 && ratio < kLossRatioMax && last.flow < first.flow &&
                  recall.recall >= kRecallFactor * recall.chance && train_s < kTrainBudgetS;
  return {ok, fmt("total %.3f -> %.3f (%.1f%%), flow %.4f -> %.4f, bow recall@%zu %.3f vs chance %.3f (%.1fx), %.0fs",
                  first.total, last.total, 100 * ratio, first.flow, last.flow, kRecallK, recall.recall,
                  recall.chance, recall.recall / recall.chance, train_s)};
}

// ---- 6

Outcome nucleus_sampling(const df::PlanningModel& model) {
  df::Rng rng(606);
  size_t set_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + rng.uniform_int(64);
    std::vector<double> d(n);
    double sum = 0;
    for (auto& x : d) {
      x = rng.bernoulli(0.15) ? 0.0 : (rng.bernoulli(0.5) ? static_cast<double>(1 + rng.uniform_int(3)) : rng.uniform());
      sum += x;
    }
    if (sum == 0) {
      d[0] = 1;
      sum = 1;
    }
    for (auto& x : d) x /= sum;
    const double p = rng.bernoulli(0.1) ? 1.0 : 0.01 + 0.98 * rng.uniform();
    const auto got = df::nucleus(d, p);
    set_bad += std::set<df::TokenId>(got.begin(), got.end()) != dt::nucleus_reference(d, p);
  }

  const auto corpus = df::gen_synth_corpus(33, 200);
  size_t sampled = 0, outside = 0;
  df::GenerateOptions o;
  o.observer = [&](const df::StepRecord& r) {
    ++sampled;
    outside += std::find(r.nucleus.begin(), r.nucleus.end(), r.token) == r.nucleus.end();
  };
  for (size_t i = 0; sampled < 10000; ++i) {
    const auto& d = corpus[i % corpus.size()];
    const std::span<const df::Utterance> hist(d.turns.data(), 1 + i % (d.turns.size() - 1));
    o.top_p = 0.5 + 0.5 * static_cast<double>(i % 5) / 4.0;
    df::Rng r(i);
    const auto plan = model.plan_from_history(hist);
    df::generate(model, hist, i % 2 ? &plan : nullptr, o, r);
  }

  size_t greedy_bad = 0;
  df::GenerateOptions g;
  g.top_p = 1e-9;
  for (size_t i = 0; i < 50; ++i) {
    const auto& d = corpus[i];
    const std::span<const df::Utterance> hist(d.turns.data(), 1 + i % (d.turns.size() - 1));
    const auto plan = model.plan_from_history(hist);
    df::Rng r(i);
    greedy_bad += df::generate(model, hist, &plan, g, r).tokens != dt::greedy_decode(model, hist, &plan, g.max_len);
    greedy_bad += df::generate(model, hist, nullptr, g, r).tokens != dt::greedy_decode(model, hist, nullptr, g.max_len);
  }
  return {set_bad == 0 && outside == 0 && greedy_bad == 0,
          fmt("1000 sets %zu mismatches; %zu sampled tokens, %zu outside nucleus; 100 greedy runs, %zu differ",
              set_bad, sampled, outside, greedy_bad)};
}

// ---- 7

Outcome cascade_guarantees(const df::PlanningModel& model) {
  const std::vector<std::string> bad = {"idiot", "jerk", "stupid"};
  const df::AbusiveLexicon lex(bad);
  const df::NliRules rules;
  const auto table = df::EmbeddingTable::hashed();
  df::CascadeConfig cfg;
  const auto scorers = df::default_scorers(model, table, rules, lex, cfg);
  const std::vector<std::string> abusive = {"you idiot", "what a jerk", "stupid idea"};
  const std::vector<std::string> conflicting = {"i hate cats", "my name is sam", "i am from paris"};
  const std::vector<std::string> clean = {"i play the guitar .", "the storm is coming .", "we ate pasta for dinner .",
                                          "i read the novel slowly .", "i love cats too"};
  const std::vector<df::Utterance> ctx = {{df::Speaker::kB, "i love cats . my name is alex and i am from ohio", {}},
                                          {df::Speaker::kA, "tell me something about you", {}}};
  df::Rng rng(707);
  size_t flagged_wins = 0, oracle_bad = 0, all_flagged = 0, all_flagged_bad = 0;
  for (int pool = 0; pool < 1000; ++pool) {
    const bool only_flagged = pool % 10 == 0;
    const size_t n = 1 + rng.uniform_int(20);
    std::vector<std::string> cands;
    for (size_t i = 0; i < n; ++i) {
      const double u = rng.uniform();
      const auto& src = only_flagged ? (u < 0.5 ? abusive : conflicting)
                                     : (u < 0.25 ? abusive : u < 0.5 ? conflicting : clean);
      std::string c = src[rng.uniform_int(src.size())];
      if (rng.bernoulli(0.5)) c = dt::random_sentence(rng, 1, 6, 10) + " " + c;
      cands.push_back(c);
    }
    cfg.k = 1 + rng.uniform_int(12);
    const auto tr = df::select_response(ctx, cands, cfg, scorers);
    const auto want = dt::cascade_reference(ctx, cands, cfg, scorers);
    oracle_bad += tr.selected_index != want.selected || tr.fallback != want.fallback || tr.response != want.response;
    bool unflagged_survivor = false;
    for (const auto& c : tr.candidates) {
      const bool flagged = c.abusive || c.conflict;
      if (!flagged && c.dropped_at != df::Stage::kCoherence) unflagged_survivor = true;
    }
    if (tr.selected_index) {
      const auto& s = tr.candidates[*tr.selected_index];
      flagged_wins += s.abusive || s.conflict;
    } else {
      flagged_wins += unflagged_survivor;
    }
    flagged_wins += lex.flags(tr.response);
    if (only_flagged) {
      ++all_flagged;
      all_flagged_bad += !tr.fallback || tr.selected_index.has_value();
    }
  }
  return {flagged_wins == 0 && oracle_bad == 0 && all_flagged_bad == 0,
          fmt("1000 pools: %zu flagged selections, %zu oracle mismatches, %zu/%zu all-flagged pools without fallback",
              flagged_wins, oracle_bad, all_flagged_bad, all_flagged)};
}

// ---- 8

bool within_sigma(size_t count, size_t n, double p, double* z_out) {
  const double sigma = std::sqrt(static_cast<double>(n) * p * (1 - p));
  const double z = (static_cast<double>(count) - static_cast<double>(n) * p) / sigma;
  *z_out = std::max(*z_out, std::abs(z));
  return std::abs(z) <= kSigmas;
}

Outcome augmentation() {
  const size_t n = 10000;
  double worst_z = 0;
  bool ok = true;
  size_t invalid = 0;

  df::Dialogue eight;
  eight.id = "eight";
  for (size_t i = 0; i < 8; ++i) {
    eight.turns.push_back({i % 2 ? df::Speaker::kB : df::Speaker::kA, "turn " + std::to_string(i), {}});
  }
  df::Rng rng(808);
  std::map<size_t, size_t> cuts;
  for (size_t i = 0; i < n; ++i) {
    const auto t = df::truncate_dialogue(eight, rng);
    invalid += !df::is_valid(t);
    ++cuts[t.turns.size()];
  }
  ok = ok && cuts.size() == 6;
  for (size_t len = 2; len <= 7; ++len) ok = within_sigma(cuts[len], n, 1.0 / 6, &worst_z) && ok;

  const auto corpus = df::gen_synth_corpus(8, 50);
  const df::AugmentConfig cfg{0.3, 0.2, 2};
  size_t counts[3] = {0, 0, 0};
  for (size_t i = 0; i < n; ++i) {
    const auto s = df::sample_training_dialogue(corpus, cfg, rng);
    ++counts[static_cast<int>(s.branch)];
    invalid += !df::is_valid(s.dialogue);
  }
  ok = within_sigma(counts[1], n, 0.3, &worst_z) && ok;
  ok = within_sigma(counts[2], n, 0.2, &worst_z) && ok;
  ok = within_sigma(counts[0], n, 0.5, &worst_z) && ok;
  return {ok && invalid == 0,
          fmt("cuts 2..7 = %zu %zu %zu %zu %zu %zu; branches raw/trunc/concat = %zu/%zu/%zu; max |z| %.2f; %zu invalid",
              cuts[2], cuts[3], cuts[4], cuts[5], cuts[6], cuts[7], counts[0], counts[1], counts[2], worst_z, invalid)};
}

// ---- 9

class ServerProcess {
 public:
  ServerProcess(const std::vector<std::string>& args) {
    int fds[2];
    if (::pipe(fds) != 0) throw std::runtime_error("pipe failed");
    pid_ = ::fork();
    if (pid_ < 0) throw std::runtime_error("fork failed");
    if (pid_ == 0) {
      ::dup2(fds[1], STDOUT_FILENO);
      const int devnull = ::open("/dev/null", O_WRONLY);
      if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
      ::close(fds[0]);
      ::close(fds[1]);
      std::vector<char*> argv;
      argv.push_back(const_cast<char*>(DIALFLOW_BIN));
      for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      ::execv(DIALFLOW_BIN, argv.data());
      ::_exit(127);
    }
    ::close(fds[1]);
    FILE* out = ::fdopen(fds[0], "r");
    char line[512];
    if (!out || !std::fgets(line, sizeof line, out)) {
      kill_now();
      throw std::runtime_error("server did not report a port");
    }
    std::fclose(out);
    const std::string s(line);
    const auto colon = s.rfind(':');
    port_ = std::stoi(s.substr(colon + 1));
  }
  ~ServerProcess() { kill_now(); }
  int port() const { return port_; }
  void kill_now() {
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
  }

 private:
  pid_t pid_ = -1;
  int port_ = 0;
};

struct Script {
  // (session slot, text)
  std::vector<std::pair<int, std::string>> messages = {
      {0, "i play the guitar ."},     {1, "the storm is coming ."},   {2, "i love cats"},
      {1, "we expect snow tomorrow ."}, {0, "the piano sounds lovely ."}, {2, "my name is alex ."},
      {0, "we heard the band live ."}, {2, "i am from paris ."},     {1, "the wind feels cold ."},
      {2, "do you like dogs ?"},      {0, "what about jazz ?"},      {1, "is it raining there ?"}};
};

std::vector<std::string> server_args(const std::filesystem::path& log, const std::filesystem::path& ckpt) {
  const std::string data = DIALFLOW_DATA;
  return {"serve", "--config", data + "/service.conf", "--checkpoint", ckpt.string(), "--log", log.string(),
          "--port", "0", "--abusive-lexicon", data + "/abusive.txt", "--casing-lexicon", data + "/casing.tsv",
          "--nli-rules", data + "/nli_extra.tsv", "--fallbacks", data + "/fallbacks.txt", "--seed", "7"};
}

json get_json(httplib::Client& c, const std::string& path) {
  auto r = c.Get(path);
  if (!r || r->status != 200) throw std::runtime_error("GET " + path + " failed");
  return json::parse(r->body);
}

json post_json(httplib::Client& c, const std::string& path, const json& body, int want) {
  auto r = c.Post(path, body.dump(), "application/json");
  if (!r || r->status != want) {
    throw std::runtime_error("POST " + path + " failed" + (r ? " with " + std::to_string(r->status) : ""));
  }
  return json::parse(r->body);
}

struct RunLog {
  std::vector<std::string> ids;
  std::vector<std::string> replies;
  std::vector<json> traces;
  std::vector<json> histories;  // per session, after the script
};

// Runs the script; kill_after < 12 SIGKILLs the server after that many
// messages and restarts it on the same log.
RunLog run_script(const std::filesystem::path& dir, const std::filesystem::path& ckpt, size_t kill_after,
                  std::vector<json>* recovered_histories) {
  std::filesystem::create_directories(dir);
  const auto log = dir / "events.jsonl";
  const auto args = server_args(log, ckpt);
  RunLog out;
  auto server = std::make_unique<ServerProcess>(args);
  auto client = std::make_unique<httplib::Client>("127.0.0.1", server->port());
  for (int s = 0; s < 3; ++s) out.ids.push_back(post_json(*client, "/api/sessions", json::object(), 201)["session_id"]);
  const Script script;
  for (size_t i = 0; i < script.messages.size(); ++i) {
    if (i == kill_after) {
      server->kill_now();
      server = std::make_unique<ServerProcess>(args);
      client = std::make_unique<httplib::Client>("127.0.0.1", server->port());
    }
    const auto& [slot, text] = script.messages[i];
    const auto body = post_json(*client, "/api/sessions/" + out.ids[static_cast<size_t>(slot)] + "/messages",
                                {{"text", text}}, 200);
    out.replies.push_back(body["reply"]);
    out.traces.push_back(body["trace"]);
  }
  for (const auto& id : out.ids) out.histories.push_back(get_json(*client, "/api/sessions/" + id)["turns"]);
  server->kill_now();
  if (recovered_histories) {
    ServerProcess again(args);
    httplib::Client c("127.0.0.1", again.port());
    for (const auto& id : out.ids) recovered_histories->push_back(get_json(c, "/api/sessions/" + id)["turns"]);
  }
  return out;
}

size_t trace_violations(const RunLog& run, const df::AbusiveLexicon& lex, const df::CasingLexicon& casing) {
  size_t bad = 0;
  for (size_t i = 0; i < run.replies.size(); ++i) {
    const json& tr = run.traces[i];
    bad += run.replies[i].empty() || lex.flags(run.replies[i]);
    bad += run.replies[i] != df::finalize_text(tr["response"].get<std::string>(), casing);
    const auto& cands = tr["candidates"];
    size_t accounted = 0;
    for (const auto& c : cands) accounted += !c["dropped_at"].is_null();
    if (tr["selected_index"].is_null()) {
      bad += !tr["fallback"].get<bool>() || accounted != cands.size();
    } else {
      const auto& s = cands[tr["selected_index"].get<size_t>()];
      bad += s["abusive"].get<bool>() || s["conflict"].get<bool>() || accounted + 1 != cands.size();
    }
  }
  return bad;
}

Outcome service_replay(const std::filesystem::path& ckpt) {
  const auto root = dt::scratch_dir("acceptance_service");
  std::vector<json> recovered;
  const auto a = run_script(root / "a", ckpt, 12, &recovered);
  const auto b = run_script(root / "b", ckpt, 6, nullptr);
  const size_t turns = [&] {
    size_t t = 0;
    for (const auto& h : a.histories) t += h.size();
    return t;
  }();
  const bool history_same = recovered == a.histories;
  // sessions are matched by slot; ids differ between runs
  const bool replies_same = a.replies == b.replies && a.histories == b.histories;
  const auto data = std::string(DIALFLOW_DATA);
  const auto lex = df::AbusiveLexicon::from_file(data + "/abusive.txt");
  const auto casing = df::CasingLexicon::from_file(data + "/casing.tsv");
  const size_t violations = trace_violations(a, lex, casing) + trace_violations(b, lex, casing);
  size_t fallbacks = 0;
  for (const auto& tr : a.traces) fallbacks += tr["fallback"].get<bool>();
  return {history_same && replies_same && violations == 0 && turns == 24,
          fmt("3 sessions, 12 messages, %zu turns; recovered histories %s; replies across a mid-run kill %s; "
              "%zu cascade violations, %zu fallback replies; no UI built",
              turns, history_same ? "identical" : "DIFFER", replies_same ? "identical" : "DIFFER", violations,
              fallbacks)};
}

}  // namespace

int main() {
  const auto dir = dt::scratch_dir("acceptance");
  const auto ckpt = dir / "synth500.dpm";
  int failures = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  };
  report("ensemble-oracle", ensemble_oracle);
  report("table1-rank", table_ranking);
  report("gradient-check", gradient_check);
  report("loss-identities", loss_identities);
  report("training-sanity", [&] { return training(ckpt); });
  // sampling and cascade checks run on the trained model when it exists
  std::shared_ptr<const df::PlanningModel> model;
  try {
    model = std::make_shared<const df::PlanningModel>(df::load_checkpoint(ckpt));
  } catch (const std::exception&) {
    model = std::make_shared<const df::PlanningModel>(dt::tiny_trained_model());
    df::save_checkpoint(*model, ckpt);
  }
  report("nucleus-sampling", [&] { return nucleus_sampling(*model); });
  report("cascade-guarantees", [&] { return cascade_guarantees(*model); });
  report("augmentation-distributions", augmentation);
  report("service-replay", [&] { return service_replay(ckpt); });
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
