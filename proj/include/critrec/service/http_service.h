// Copyright 2026 The critrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRITREC_SERVICE_HTTP_SERVICE_H_
#define CRITREC_SERVICE_HTTP_SERVICE_H_

#include <memory>
#include <string>

#include "critrec/service/session_manager.h"

namespace httplib {
class Server;
}

namespace critrec {

struct ServiceConfig {
  std::string checkpoint;
  std::string corpus;  // optional; only used to report provenance on /health
  std::string host = "127.0.0.1";
  int port = 8080;
  int64_t top_n = 20;
  CritiqueParams critique;
  std::string snapshot_dir;
  int threads = 8;
};

// HTTP status for an error code; unknown codes map to 500.
int StatusForError(const std::string &code);
// {"error": {"code", "message"}}
nlohmann::json ApiErrorBody(const std::string &code, const std::string &message);

// Installs the JSON routes on `server`. The manager must outlive the server.
void RegisterRoutes(httplib::Server &server, SessionManager &manager, const nlohmann::json &health);

// Loads the checkpoint, restores snapshots and serves until the process is
// stopped. Throws Error when the checkpoint or bind fails.
void RunService(const ServiceConfig &config);

}  // namespace critrec

#endif  // CRITREC_SERVICE_HTTP_SERVICE_H_
