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

#include "dialflow/service/event_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dialflow {

namespace {

struct Line {
  uintmax_t begin, end;  // end includes the newline
  std::string text;
  bool terminated;
};

std::runtime_error sys_error(const std::string& what) {
  return std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

ReplayResult replay_log(const std::filesystem::path& path, bool repair) {
  ReplayResult out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("event log: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();

  std::vector<Line> lines;
  for (uintmax_t pos = 0; pos < data.size();) {
    const auto nl = data.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back({pos, data.size(), data.substr(pos), false});
      break;
    }
    lines.push_back({pos, nl + 1, data.substr(pos, nl - pos), true});
    pos = nl + 1;
  }

  uintmax_t good_end = 0;
  std::vector<nlohmann::json> pending;
  uint64_t pending_group = 0, pending_size = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    const bool last = i + 1 == lines.size();
    nlohmann::json ev;
    try {
      if (!lines[i].terminated) throw std::runtime_error("unterminated line");
      ev = nlohmann::json::parse(lines[i].text);
      if (!ev.is_object() || !ev.contains("type") || !ev.contains("group") ||
          !ev.contains("group_size")) {
        throw std::runtime_error("missing type/group fields");
      }
    } catch (const std::exception& e) {
      if (!last) {
        throw std::runtime_error("event log: " + path.string() + " line " + std::to_string(i + 1) +
                                 " is corrupt: " + e.what());
      }
      out.warnings.push_back("event log: dropped torn last line " + std::to_string(i + 1));
      break;
    }
    const auto group = ev["group"].get<uint64_t>();
    const auto size = ev["group_size"].get<uint64_t>();
    if (pending.empty()) {
      pending_group = group;
      pending_size = size;
    } else if (group != pending_group || size != pending_size) {
      throw std::runtime_error("event log: " + path.string() + " line " + std::to_string(i + 1) +
                               ": group " + std::to_string(pending_group) + " is incomplete");
    }
    pending.push_back(std::move(ev));
    if (pending.size() == pending_size) {
      for (auto& e : pending) out.events.push_back(std::move(e));
      pending.clear();
      good_end = lines[i].end;
      out.next_group = pending_group + 1;
    }
  }
  if (!pending.empty()) {
    out.warnings.push_back("event log: dropped incomplete trailing group " +
                           std::to_string(pending_group));
  }
  out.kept_bytes = good_end;
  out.dropped_bytes = data.size() - good_end;
  if (repair && out.dropped_bytes > 0) std::filesystem::resize_file(path, good_end);
  return out;
}

EventLog::EventLog(std::filesystem::path path, uint64_t next_group)
    : path_(std::move(path)), next_group_(next_group) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw sys_error("event log: cannot open " + path_.string());
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

void EventLog::append(std::vector<nlohmann::json> events) {
  if (events.empty()) return;
  std::lock_guard lock(mu_);
  std::string buf;
  for (auto& e : events) {
    e["group"] = next_group_;
    e["group_size"] = events.size();
    buf += e.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    buf.push_back('\n');
  }
  const off_t start = ::lseek(fd_, 0, SEEK_END);
  size_t done = 0;
  while (done < buf.size()) {
    const ssize_t n = ::write(fd_, buf.data() + done, buf.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const auto err = sys_error("event log: write failed");
      if (start >= 0) (void)!::ftruncate(fd_, start);
      throw err;
    }
    done += static_cast<size_t>(n);
  }
  if (::fsync(fd_) != 0) throw sys_error("event log: fsync failed");
  ++next_group_;
}

}  // namespace dialflow
