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

#ifndef DIALFLOW_SERVICE_SESSION_STORE_H_
#define DIALFLOW_SERVICE_SESSION_STORE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialflow/core/dialogue.h"
#include "dialflow/service/event_log.h"
#include "json.hpp"

namespace dialflow {

// The user speaks as A, the bot as B.
inline constexpr Speaker kUserSpeaker = Speaker::kA;
inline constexpr Speaker kBotSpeaker = Speaker::kB;

struct Session {
  std::string id;
  std::vector<Utterance> turns;
  std::string created_at;
  std::string updated_at;
  nlohmann::json last_trace;

  bool operator==(const Session&) const = default;
};

// In-memory state derived purely from log events, so live updates and
// replay go through the same code.
class SessionStore {
 public:
  // Errors (std::runtime_error): unknown event type, unknown or duplicate
  // session, a turn out of user/bot order.
  void apply(const nlohmann::json& event);

  const Session* find(const std::string& id) const;
  size_t size() const { return sessions_.size(); }
  std::vector<std::string> ids() const;

  bool operator==(const SessionStore&) const = default;

 private:
  std::map<std::string, Session> sessions_;
};

struct Recovery {
  SessionStore store;
  ReplayResult replay;
};

// Replays the log at `path` (truncating a torn tail when repair is set).
Recovery recover(const std::filesystem::path& path, bool repair = true);

// Event constructors.
nlohmann::json session_created_event(const std::string& id, const std::string& at);
nlohmann::json turn_added_event(const std::string& id, Speaker speaker, const std::string& text,
                                const std::string& at);
nlohmann::json trace_event(const std::string& id, size_t turn, nlohmann::json trace);

}  // namespace dialflow

#endif  // DIALFLOW_SERVICE_SESSION_STORE_H_
