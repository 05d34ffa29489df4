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

#include "dialflow/service/http_api.h"

#include <stdexcept>

#include "httplib.h"

namespace dialflow {

namespace {

constexpr const char* kJson = "application/json";

std::string dump(const nlohmann::json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void send(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(dump(body), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send(res, status, {{"error", message}});
}

// Runs fn, mapping ServiceError to its status and anything else to 500.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    send_error(res, e.status, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

HttpServer::HttpServer(ChatService& service, const std::string& ui_dir)
    : server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Post("/api/sessions", [&service](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send(res, 201, {{"session_id", service.create_session()}}); });
  });

  s.Post(R"(/api/sessions/([^/]+)/messages)", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::exception&) {
        throw ServiceError(400, "request body is not valid JSON");
      }
      if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
        throw ServiceError(400, "request body needs a string field 'text'");
      }
      const Reply r = service.post_message(req.matches[1], body["text"].get<std::string>());
      send(res, 200, {{"reply", r.reply}, {"trace", r.trace_json}});
    });
  });

  s.Get(R"(/api/sessions/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      nlohmann::json turns = nlohmann::json::array();
      for (const auto& u : service.get_session(req.matches[1])) {
        turns.push_back({{"speaker", u.speaker == kUserSpeaker ? "user" : "bot"}, {"text", u.text}});
      }
      send(res, 200, {{"session_id", std::string(req.matches[1])}, {"turns", turns}});
    });
  });

  s.Get("/api/health", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, 200, {{"status", "ok"}, {"model_loaded", service.model_loaded()}});
  });

  if (!ui_dir.empty() && !s.set_mount_point("/ui", ui_dir)) {
    throw std::runtime_error("http: cannot serve ui directory " + ui_dir);
  }

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, res.status == 404 ? "not found" : "request failed");
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw std::runtime_error("http: cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("http: cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace dialflow
