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

// JSON over HTTP:
//   POST /api/sessions                 -> 201 {"session_id"}
//   POST /api/sessions/{id}/messages   {"text"} -> 200 {"reply", "trace"}
//   GET  /api/sessions/{id}            -> 200 {"session_id", "turns": [{"speaker", "text"}]}
//   GET  /api/health                   -> 200 {"status": "ok", "model_loaded"}
// Errors are {"error": message} with a 4xx/5xx status.

#ifndef DIALFLOW_SERVICE_HTTP_API_H_
#define DIALFLOW_SERVICE_HTTP_API_H_

#include <memory>
#include <string>

#include "dialflow/service/chat_service.h"

namespace httplib {
class Server;
}

namespace dialflow {

class HttpServer {
 public:
  // ui_dir, when non-empty, is served under /ui.
  HttpServer(ChatService& service, const std::string& ui_dir = "");
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port. Errors: bind failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace dialflow

#endif  // DIALFLOW_SERVICE_HTTP_API_H_
