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

#include "dialflow/service/config.h"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

namespace dialflow {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument("config: bad value '" + std::string(v) + "' for " + std::string(key));
  }
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  try {
    size_t used = 0;
    const double d = std::stod(std::string(v), &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: bad value '" + std::string(v) + "' for " + std::string(key));
}

}  // namespace

void ServiceConfig::set(std::string_view key, std::string_view value) {
  const std::string v(trim(value));
  if (key == "checkpoint") checkpoint = v;
  else if (key == "abusive_lexicon") abusive_lexicon = v;
  else if (key == "casing_lexicon") casing_lexicon = v;
  else if (key == "nli_rules") nli_rules = v;
  else if (key == "fallbacks") fallbacks = v;
  else if (key == "embeddings") embeddings = v;
  else if (key == "log") log = v;
  else if (key == "ui_dir") ui_dir = v;
  else if (key == "host") host = v;
  else if (key == "port") port = parse_number<int>(key, v);
  else if (key == "n_candidates") n_candidates = parse_number<size_t>(key, v);
  else if (key == "top_p") top_p = parse_double(key, v);
  else if (key == "max_len") max_len = parse_number<int>(key, v);
  else if (key == "seed") seed = parse_number<uint64_t>(key, v);
  else if (key == "k") k = parse_number<size_t>(key, v);
  else if (key == "alpha") alpha = parse_double(key, v);
  else throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
}

void ServiceConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(path.string() + " line " + std::to_string(n) + ": expected key = value");
    }
    try {
      set(trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
}

void ServiceConfig::validate() const {
  if (n_candidates < 1) throw std::invalid_argument("config: n_candidates must be >= 1");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw std::invalid_argument("config: top_p must be in (0, 1]");
  if (max_len < 1) throw std::invalid_argument("config: max_len must be >= 1");
  if (port < 0 || port > 65535) throw std::invalid_argument("config: port outside [0, 65535]");
  if (k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("config: alpha must be in [0, 1]");
  if (log.empty()) throw std::invalid_argument("config: log path is required");
}

}  // namespace dialflow
