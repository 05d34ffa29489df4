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

#ifndef DIALFLOW_SERVICE_CHAT_SERVICE_H_
#define DIALFLOW_SERVICE_CHAT_SERVICE_H_

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialflow/metrics/embedding_table.h"
#include "dialflow/model/planning_model.h"
#include "dialflow/postprocess/finalize.h"
#include "dialflow/scoring/cascade.h"
#include "dialflow/service/config.h"
#include "dialflow/service/event_log.h"
#include "dialflow/service/session_store.h"

namespace dialflow {

// Carries the HTTP status class the API maps it to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status(status) {}
  int status;
};

struct Resources {
  std::shared_ptr<const PlanningModel> model;  // null: replies are unavailable
  AbusiveLexicon abusive;
  CasingLexicon casing;
  NliRules rules;
  EmbeddingTable table = EmbeddingTable::hashed();
  std::vector<std::string> fallbacks;  // empty: cascade defaults
};

// Loads every file named in the config. Errors propagate from the loaders.
Resources load_resources(const ServiceConfig& cfg);

struct Reply {
  std::string reply;
  Trace trace;
  nlohmann::json trace_json;
};

class ChatService {
 public:
  // Recovers sessions from cfg.log, repairing a torn tail, then appends.
  ChatService(ServiceConfig cfg, Resources resources);

  std::string create_session();

  // Errors: 404 unknown session, 400 blank or overlong text, 503 no model,
  // 500 storage failure.
  Reply post_message(const std::string& session_id, const std::string& text);

  // Errors: 404 unknown session.
  std::vector<Utterance> get_session(const std::string& session_id) const;

  bool model_loaded() const { return res_.model != nullptr; }
  const std::vector<std::string>& recovery_warnings() const { return warnings_; }
  size_t session_count() const;
  const ServiceConfig& config() const { return cfg_; }

 private:
  std::shared_ptr<std::mutex> session_mutex(const std::string& id);

  ServiceConfig cfg_;
  Resources res_;
  CascadeConfig cascade_;
  std::vector<std::string> warnings_;
  mutable std::mutex mu_;  // guards store_ and locks_
  SessionStore store_;
  std::map<std::string, std::shared_ptr<std::mutex>> locks_;
  std::unique_ptr<EventLog> log_;
};

// Seed of candidate `candidate` in the exchange that follows `turns` turns.
uint64_t candidate_seed(uint64_t service_seed, size_t turns, size_t candidate);

}  // namespace dialflow

#endif  // DIALFLOW_SERVICE_CHAT_SERVICE_H_
