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

#include "dialflow/service/session_store.h"

#include <stdexcept>

namespace dialflow {

namespace {

const char* role(Speaker s) { return s == kUserSpeaker ? "user" : "bot"; }

}  // namespace

nlohmann::json session_created_event(const std::string& id, const std::string& at) {
  return {{"type", "session_created"}, {"session_id", id}, {"at", at}};
}

nlohmann::json turn_added_event(const std::string& id, Speaker speaker, const std::string& text,
                                const std::string& at) {
  return {{"type", "turn_added"}, {"session_id", id}, {"speaker", role(speaker)}, {"text", text}, {"at", at}};
}

nlohmann::json trace_event(const std::string& id, size_t turn, nlohmann::json trace) {
  return {{"type", "trace"}, {"session_id", id}, {"turn", turn}, {"trace", std::move(trace)}};
}

void SessionStore::apply(const nlohmann::json& ev) {
  try {
    const std::string type = ev.at("type").get<std::string>();
    const std::string id = ev.at("session_id").get<std::string>();
    if (type == "session_created") {
      if (sessions_.contains(id)) throw std::runtime_error("duplicate session " + id);
      Session s;
      s.id = id;
      s.created_at = s.updated_at = ev.at("at").get<std::string>();
      sessions_.emplace(id, std::move(s));
      return;
    }
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw std::runtime_error("unknown session " + id);
    Session& s = it->second;
    if (type == "turn_added") {
      const std::string who = ev.at("speaker").get<std::string>();
      if (who != "user" && who != "bot") throw std::runtime_error("bad speaker '" + who + "'");
      const Speaker sp = who == "user" ? kUserSpeaker : kBotSpeaker;
      const Speaker expected = s.turns.empty() ? kUserSpeaker : other(s.turns.back().speaker);
      if (sp != expected) throw std::runtime_error("turn out of order in session " + id);
      s.turns.push_back({sp, ev.at("text").get<std::string>(), {}});
      s.updated_at = ev.at("at").get<std::string>();
    } else if (type == "trace") {
      s.last_trace = ev.at("trace");
    } else {
      throw std::runtime_error("unknown event type '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed event: ") + e.what());
  }
}

const Session* SessionStore::find(const std::string& id) const {
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::vector<std::string> SessionStore::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

Recovery recover(const std::filesystem::path& path, bool repair) {
  Recovery r;
  r.replay = replay_log(path, repair);
  for (size_t i = 0; i < r.replay.events.size(); ++i) {
    try {
      r.store.apply(r.replay.events[i]);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("event log: " + path.string() + " event " + std::to_string(i + 1) +
                               ": " + e.what());
    }
  }
  return r;
}

}  // namespace dialflow
