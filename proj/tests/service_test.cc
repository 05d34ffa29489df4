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

#include <fstream>
#include <regex>
#include <thread>

#include <gtest/gtest.h>

#include "dialflow/postprocess/finalize.h"
#include "dialflow/service/chat_service.h"
#include "dialflow/service/config.h"
#include "dialflow/service/event_log.h"
#include "dialflow/service/http_api.h"
#include "dialflow/service/session_store.h"
#include "httplib.h"
#include "test_support.h"

namespace dialflow {
namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// ---- config

TEST(ServiceConfigTest, SetMergeValidate) {
  ServiceConfig c;
  c.set("port", "9000");
  c.set("top_p", "0.5");
  c.set("checkpoint", "m.dpm");
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.top_p, 0.5);
  EXPECT_EQ(c.checkpoint, "m.dpm");
  EXPECT_THROW(c.set("colour", "red"), std::invalid_argument);
  EXPECT_THROW(c.set("port", "lots"), std::invalid_argument);

  const auto dir = testing::scratch_dir("conf");
  std::ofstream(dir / "ok.conf") << "# comment\n\nseed = 7\n n_candidates=4 \nhost = 0.0.0.0\n";
  std::ofstream(dir / "bad.conf") << "seed = 7\nnonsense\n";
  c.merge_file(dir / "ok.conf");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.n_candidates, 4u);
  EXPECT_EQ(c.host, "0.0.0.0");
  try {
    c.merge_file(dir / "bad.conf");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  c.top_p = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

// ---- event log

TEST(EventLogTest, MissingFileIsEmpty) {
  const auto dir = testing::scratch_dir("log");
  const auto r = replay_log(dir / "none.jsonl", true);
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(r.next_group, 0u);
}

TEST(EventLogTest, AppendAndReplayGroups) {
  const auto dir = testing::scratch_dir("log");
  const auto path = dir / "ev.jsonl";
  {
    EventLog log(path, 0);
    log.append({json{{"type", "a"}}});
    log.append({json{{"type", "b"}}, json{{"type", "c"}}});
  }
  const auto r = replay_log(path, false);
  ASSERT_EQ(r.events.size(), 3u);
  EXPECT_EQ(r.events[2]["type"], "c");
  EXPECT_EQ(r.events[1]["group"], 1);
  EXPECT_EQ(r.events[1]["group_size"], 2);
  EXPECT_EQ(r.next_group, 2u);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(EventLogTest, TornTailIsDroppedAndRepaired) {
  const auto dir = testing::scratch_dir("log");
  const auto path = dir / "ev.jsonl";
  {
    EventLog log(path, 0);
    log.append({json{{"type", "a"}}});
  }
  const auto clean = slurp(path);
  std::ofstream(path, std::ios::app) << R"({"type":"b","gro)";
  const auto r = replay_log(path, true);
  EXPECT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(slurp(path), clean);
  // a second replay is a no-op
  const auto again = replay_log(path, true);
  EXPECT_TRUE(again.warnings.empty());
  EXPECT_EQ(again.events, r.events);
}

TEST(EventLogTest, IncompleteTrailingGroupIsDropped) {
  const auto dir = testing::scratch_dir("log");
  const auto path = dir / "ev.jsonl";
  {
    EventLog log(path, 0);
    log.append({json{{"type", "a"}}});
  }
  const auto clean = slurp(path);
  std::ofstream(path, std::ios::app) << R"({"type":"b","group":1,"group_size":3})" << "\n"
                                     << R"({"type":"c","group":1,"group_size":3})" << "\n";
  const auto r = replay_log(path, true);
  EXPECT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.next_group, 1u);
  EXPECT_EQ(slurp(path), clean);
}

TEST(EventLogTest, CorruptMiddleLineIsFatal) {
  const auto dir = testing::scratch_dir("log");
  const auto path = dir / "ev.jsonl";
  std::ofstream(path) << R"({"type":"a","group":0,"group_size":1})" << "\n"
                      << "garbage\n"
                      << R"({"type":"a","group":1,"group_size":1})" << "\n";
  EXPECT_THROW(replay_log(path, true), std::runtime_error);
}

// ---- session store

TEST(SessionStoreTest, AppliesEventsInOrder) {
  SessionStore s;
  s.apply(session_created_event("x", "t0"));
  s.apply(turn_added_event("x", kUserSpeaker, "hi", "t1"));
  s.apply(turn_added_event("x", kBotSpeaker, "hello", "t2"));
  s.apply(trace_event("x", 2, json{{"response", "hello"}}));
  const Session* x = s.find("x");
  ASSERT_NE(x, nullptr);
  EXPECT_EQ(x->turns.size(), 2u);
  EXPECT_EQ(x->created_at, "t0");
  EXPECT_EQ(x->updated_at, "t2");
  EXPECT_EQ(x->last_trace["response"], "hello");
  EXPECT_THROW(s.apply(turn_added_event("x", kBotSpeaker, "again", "t3")), std::runtime_error);
  EXPECT_THROW(s.apply(turn_added_event("y", kUserSpeaker, "hi", "t3")), std::runtime_error);
  EXPECT_THROW(s.apply(session_created_event("x", "t4")), std::runtime_error);
  EXPECT_THROW(s.apply(json{{"type", "mystery"}, {"session_id", "x"}}), std::runtime_error);
}

// ---- chat service

Resources resources_with_model() {
  Resources r;
  r.model = std::make_shared<const PlanningModel>(testing::tiny_trained_model());
  const std::vector<std::string> bad = {"idiot"};
  r.abusive = AbusiveLexicon(bad);
  r.casing = CasingLexicon(std::map<std::string, std::string>{{"paris", "Paris"}});
  return r;
}

ServiceConfig config_in(const std::filesystem::path& dir) {
  ServiceConfig c;
  c.log = (dir / "events.jsonl").string();
  c.seed = 11;
  return c;
}

void expect_reply_invariants(const Reply& r, const AbusiveLexicon& lex, const CasingLexicon& casing) {
  EXPECT_FALSE(r.reply.empty());
  EXPECT_FALSE(lex.flags(r.reply));
  EXPECT_EQ(r.reply, finalize_text(r.trace.response, casing));
  if (r.trace.selected_index) {
    const auto& c = r.trace.candidates[*r.trace.selected_index];
    EXPECT_FALSE(c.abusive);
    EXPECT_FALSE(c.conflict);
  } else {
    for (const auto& c : r.trace.candidates) EXPECT_TRUE(c.dropped_at.has_value());
  }
}

TEST(ChatServiceTest, SessionsAndMessages) {
  const auto dir = testing::scratch_dir("svc");
  const auto res = resources_with_model();
  ChatService svc(config_in(dir), res);
  const auto a = svc.create_session();
  const auto b = svc.create_session();
  EXPECT_NE(a, b);
  EXPECT_TRUE(std::regex_match(a, std::regex("[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}")));
  EXPECT_TRUE(svc.get_session(a).empty());

  const auto r = svc.post_message(a, "i play the guitar .");
  expect_reply_invariants(r, res.abusive, res.casing);
  ASSERT_EQ(r.trace.candidates.size(), svc.config().n_candidates);
  size_t planned = 0;
  for (bool p : r.trace.planned) planned += p;
  EXPECT_EQ(planned, (svc.config().n_candidates + 1) / 2);
  EXPECT_EQ(r.trace.seeds[0], candidate_seed(11, 0, 0));
  EXPECT_EQ(r.trace_json["reply"], r.reply);

  svc.post_message(a, "what about paris ?");
  const auto turns = svc.get_session(a);
  ASSERT_EQ(turns.size(), 4u);
  EXPECT_EQ(turns[0].text, "i play the guitar .");
  EXPECT_EQ(turns[0].speaker, kUserSpeaker);
  EXPECT_EQ(turns[1].speaker, kBotSpeaker);
  EXPECT_TRUE(svc.get_session(b).empty());
}

TEST(ChatServiceTest, ErrorStatuses) {
  const auto dir = testing::scratch_dir("svc");
  ChatService svc(config_in(dir), resources_with_model());
  const auto id = svc.create_session();
  auto status = [&](auto fn) {
    try {
      fn();
    } catch (const ServiceError& e) {
      return e.status;
    }
    return 0;
  };
  EXPECT_EQ(status([&] { svc.post_message("nope", "hi"); }), 404);
  EXPECT_EQ(status([&] { svc.get_session("nope"); }), 404);
  EXPECT_EQ(status([&] { svc.post_message(id, "   "); }), 400);
  std::string huge;
  for (int i = 0; i < 400; ++i) huge += "word ";
  EXPECT_EQ(status([&] { svc.post_message(id, huge); }), 400);
  EXPECT_TRUE(svc.get_session(id).empty());

  const auto dir2 = testing::scratch_dir("svc");
  ChatService no_model(config_in(dir2), Resources{});
  EXPECT_FALSE(no_model.model_loaded());
  const auto id2 = no_model.create_session();
  EXPECT_EQ(status([&] { no_model.post_message(id2, "hello"); }), 503);
}

TEST(ChatServiceTest, RecoveryRestoresIdenticalState) {
  const auto dir = testing::scratch_dir("svc");
  std::vector<std::vector<Utterance>> before;
  std::vector<std::string> ids;
  {
    ChatService svc(config_in(dir), resources_with_model());
    for (int i = 0; i < 2; ++i) ids.push_back(svc.create_session());
    for (int m = 0; m < 3; ++m) {
      for (const auto& id : ids) svc.post_message(id, "the storm is coming . round " + std::to_string(m));
    }
    for (const auto& id : ids) before.push_back(svc.get_session(id));
  }
  // a torn half-line from a crash mid-write
  std::ofstream(dir / "events.jsonl", std::ios::app) << R"({"type":"turn_added","sess)";
  ChatService again(config_in(dir), resources_with_model());
  EXPECT_EQ(again.recovery_warnings().size(), 1u);
  EXPECT_EQ(again.session_count(), 2u);
  for (size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(again.get_session(ids[i]), before[i]);
  // the log is usable after repair
  again.post_message(ids[0], "one more");
  EXPECT_EQ(recover(dir / "events.jsonl").store.find(ids[0])->turns.size(), 8u);
  // replay is idempotent
  EXPECT_EQ(recover(dir / "events.jsonl").store, recover(dir / "events.jsonl").store);
}

TEST(ChatServiceTest, RepliesAreDeterministicAcrossInstances) {
  std::vector<std::string> replies[2];
  for (int run = 0; run < 2; ++run) {
    ChatService svc(config_in(testing::scratch_dir("svc")), resources_with_model());
    const auto a = svc.create_session(), b = svc.create_session();
    for (const char* text : {"i feed the cat .", "the rain is coming .", "i read the novel ."}) {
      replies[run].push_back(svc.post_message(a, text).reply);
      replies[run].push_back(svc.post_message(b, text).reply);
    }
  }
  EXPECT_EQ(replies[0], replies[1]);
}

TEST(ChatServiceTest, ConcurrentSessionsStayIsolated) {
  const auto dir = testing::scratch_dir("svc");
  ChatService svc(config_in(dir), resources_with_model());
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(svc.create_session());
  std::vector<std::thread> threads;
  for (size_t i = 0; i < ids.size(); ++i) {
    threads.emplace_back([&, i] {
      for (int m = 0; m < 3; ++m) svc.post_message(ids[i], "session " + std::to_string(i) + " message " + std::to_string(m));
    });
  }
  for (auto& t : threads) t.join();
  for (size_t i = 0; i < ids.size(); ++i) {
    const auto turns = svc.get_session(ids[i]);
    ASSERT_EQ(turns.size(), 6u);
    for (int m = 0; m < 3; ++m) {
      EXPECT_EQ(turns[2 * static_cast<size_t>(m)].text, "session " + std::to_string(i) + " message " + std::to_string(m));
    }
  }
  EXPECT_EQ(recover(dir / "events.jsonl").store.size(), 4u);
}

// ---- HTTP

TEST(HttpApiTest, EndToEnd) {
  const auto dir = testing::scratch_dir("http");
  ChatService svc(config_in(dir), resources_with_model());
  HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  std::thread loop([&] { server.listen(); });
  httplib::Client cli("127.0.0.1", port);

  auto health = cli.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["model_loaded"], true);

  auto created = cli.Post("/api/sessions", "", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["session_id"];

  auto msg = cli.Post("/api/sessions/" + id + "/messages", R"({"text":"i cook the pasta ."})", "application/json");
  ASSERT_TRUE(msg);
  EXPECT_EQ(msg->status, 200);
  const auto body = json::parse(msg->body);
  EXPECT_FALSE(body["reply"].get<std::string>().empty());
  EXPECT_EQ(body["trace"]["candidates"].size(), svc.config().n_candidates);
  EXPECT_EQ(body["trace"]["reply"], body["reply"]);

  auto hist = cli.Get("/api/sessions/" + id);
  ASSERT_TRUE(hist);
  const auto turns = json::parse(hist->body)["turns"];
  ASSERT_EQ(turns.size(), 2u);
  EXPECT_EQ(turns[0]["speaker"], "user");
  EXPECT_EQ(turns[1]["text"], body["reply"]);

  auto bad_json = cli.Post("/api/sessions/" + id + "/messages", "{nope", "application/json");
  EXPECT_EQ(bad_json->status, 400);
  EXPECT_TRUE(json::parse(bad_json->body).contains("error"));
  auto no_text = cli.Post("/api/sessions/" + id + "/messages", R"({"txt":"x"})", "application/json");
  EXPECT_EQ(no_text->status, 400);
  auto missing = cli.Get("/api/sessions/does-not-exist");
  EXPECT_EQ(missing->status, 404);
  auto unknown_route = cli.Get("/api/elsewhere");
  EXPECT_EQ(unknown_route->status, 404);
  EXPECT_TRUE(json::parse(unknown_route->body).contains("error"));

  server.stop();
  loop.join();
}

}  // namespace
}  // namespace dialflow
