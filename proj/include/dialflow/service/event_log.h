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

// Append-only JSONL event log. Events written together form a group; each
// carries "group" and "group_size" so replay can tell a complete group from
// one cut short by a crash.

#ifndef DIALFLOW_SERVICE_EVENT_LOG_H_
#define DIALFLOW_SERVICE_EVENT_LOG_H_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace dialflow {

struct ReplayResult {
  std::vector<nlohmann::json> events;
  uint64_t next_group = 0;
  uintmax_t kept_bytes = 0;
  uintmax_t dropped_bytes = 0;
  std::vector<std::string> warnings;
};

// Reads the log. A torn last line or an incomplete trailing group is
// dropped with a warning; with repair=true the file is truncated to the
// last complete group. A missing file is an empty log.
// Errors (std::runtime_error): an unparsable line or a broken group
// anywhere before the tail.
ReplayResult replay_log(const std::filesystem::path& path, bool repair);

class EventLog {
 public:
  // Opens for append; run replay_log(path, true) first so the tail is clean.
  EventLog(std::filesystem::path path, uint64_t next_group);
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  // Stamps group fields, writes all lines in one write, then fsyncs.
  void append(std::vector<nlohmann::json> events);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  uint64_t next_group_;
  std::mutex mu_;
};

}  // namespace dialflow

#endif  // DIALFLOW_SERVICE_EVENT_LOG_H_
