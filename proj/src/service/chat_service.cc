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

#include "dialflow/service/chat_service.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>

#include "dialflow/model/checkpoint.h"
#include "dialflow/model/generate.h"

namespace dialflow {

namespace {

std::string now_rfc3339() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

std::string random_id() {
  static thread_local std::random_device rd;
  unsigned char b[16];
  for (size_t i = 0; i < 16; i += 4) {
    const uint32_t v = rd();
    for (size_t j = 0; j < 4; ++j) b[i + j] = static_cast<unsigned char>(v >> (8 * j));
  }
  std::string out;
  static const char* hex = "0123456789abcdef";
  for (size_t i = 0; i < 16; ++i) {
    if (i == 4 || i == 6 || i == 8 || i == 10) out.push_back('-');
    out.push_back(hex[b[i] >> 4]);
    out.push_back(hex[b[i] & 15]);
  }
  return out;
}

std::vector<std::string> read_fallbacks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("fallbacks: cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!split_words(line).empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

}  // namespace

uint64_t candidate_seed(uint64_t service_seed, size_t turns, size_t candidate) {
  return mix_seed(mix_seed(service_seed, turns), candidate);
}

Resources load_resources(const ServiceConfig& cfg) {
  Resources r;
  if (!cfg.checkpoint.empty()) {
    r.model = std::make_shared<const PlanningModel>(load_checkpoint(cfg.checkpoint));
  }
  if (!cfg.abusive_lexicon.empty()) r.abusive = AbusiveLexicon::from_file(cfg.abusive_lexicon);
  if (!cfg.casing_lexicon.empty()) r.casing = CasingLexicon::from_file(cfg.casing_lexicon);
  if (!cfg.nli_rules.empty()) r.rules = NliRules::with_file(cfg.nli_rules);
  if (!cfg.embeddings.empty()) r.table = EmbeddingTable::from_file(cfg.embeddings);
  if (!cfg.fallbacks.empty()) r.fallbacks = read_fallbacks(cfg.fallbacks);
  return r;
}

ChatService::ChatService(ServiceConfig cfg, Resources resources)
    : cfg_(std::move(cfg)), res_(std::move(resources)) {
  cfg_.validate();
  cascade_.k = cfg_.k;
  cascade_.alpha = cfg_.alpha;
  if (!res_.fallbacks.empty()) cascade_.fallbacks = res_.fallbacks;
  cascade_.fallbacks = vet_fallbacks(cascade_.fallbacks, res_.abusive);
  cascade_.validate();
  Recovery rec = recover(cfg_.log, /*repair=*/true);
  warnings_ = rec.replay.warnings;
  store_ = std::move(rec.store);
  log_ = std::make_unique<EventLog>(cfg_.log, rec.replay.next_group);
}

std::shared_ptr<std::mutex> ChatService::session_mutex(const std::string& id) {
  std::lock_guard lock(mu_);
  if (!store_.find(id)) throw ServiceError(404, "unknown session " + id);
  auto& m = locks_[id];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

size_t ChatService::session_count() const {
  std::lock_guard lock(mu_);
  return store_.size();
}

std::string ChatService::create_session() {
  std::string id;
  {
    std::lock_guard lock(mu_);
    do id = random_id();
    while (store_.find(id) || locks_.contains(id));
    // Reserve the id before the write so a concurrent create cannot reuse it.
    locks_[id] = std::make_shared<std::mutex>();
  }
  const auto ev = session_created_event(id, now_rfc3339());
  try {
    log_->append({ev});
  } catch (const std::exception& e) {
    std::lock_guard lock(mu_);
    locks_.erase(id);
    throw ServiceError(500, std::string("storage failure: ") + e.what());
  }
  std::lock_guard lock(mu_);
  store_.apply(ev);
  return id;
}

std::vector<Utterance> ChatService::get_session(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  const Session* s = store_.find(session_id);
  if (!s) throw ServiceError(404, "unknown session " + session_id);
  return s->turns;
}

Reply ChatService::post_message(const std::string& session_id, const std::string& text) {
  const auto smu = session_mutex(session_id);
  std::lock_guard session_lock(*smu);
  if (split_words(text).empty()) throw ServiceError(400, "message text is empty");
  if (!res_.model) throw ServiceError(503, "no model loaded");
  const PlanningModel& model = *res_.model;
  const auto limit = static_cast<size_t>(model.config().max_seq - cfg_.max_len - 4);
  if (tokenize(text, model.vocab()).size() > limit) {
    throw ServiceError(400, "message is longer than " + std::to_string(limit) + " tokens");
  }

  std::vector<Utterance> history = get_session(session_id);
  const size_t turn_index = history.size();
  history.push_back({kUserSpeaker, text, {}});

  const auto context = fit_history(model, history, cfg_.max_len);
  const PlanResult plan = model.plan_from_history(context);
  GenerateOptions go;
  go.top_p = cfg_.top_p;
  go.max_len = cfg_.max_len;
  std::vector<std::string> texts;
  std::vector<uint64_t> seeds;
  std::vector<bool> planned;
  const size_t n_planned = (cfg_.n_candidates + 1) / 2;
  for (size_t i = 0; i < cfg_.n_candidates; ++i) {
    const uint64_t seed = candidate_seed(cfg_.seed, turn_index, i);
    Rng rng(seed);
    const bool use_plan = i < n_planned;
    Candidate c = generate(model, context, use_plan ? &plan : nullptr, go, rng);
    texts.push_back(c.text);
    seeds.push_back(seed);
    planned.push_back(use_plan);
  }

  const Scorers scorers = default_scorers(model, res_.table, res_.rules, res_.abusive, cascade_);
  Reply out;
  out.trace = select_response(history, texts, cascade_, scorers);
  out.trace.seeds = seeds;
  out.trace.planned = planned;
  out.reply = finalize_text(out.trace.response, res_.casing);
  out.trace_json = out.trace.to_json();
  out.trace_json["reply"] = out.reply;

  const std::string at = now_rfc3339();
  std::vector<nlohmann::json> events = {
      turn_added_event(session_id, kUserSpeaker, text, at),
      turn_added_event(session_id, kBotSpeaker, out.reply, at),
      trace_event(session_id, turn_index + 1, out.trace_json)};
  try {
    log_->append(events);
  } catch (const std::exception& e) {
    throw ServiceError(500, std::string("storage failure: ") + e.what());
  }
  std::lock_guard lock(mu_);
  for (const auto& ev : events) store_.apply(ev);
  return out;
}

}  // namespace dialflow
