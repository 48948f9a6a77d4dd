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

#include "critrec/service/http_service.h"

#include <filesystem>
#include <iostream>

#include "critrec/common/error.h"
#include "critrec/model/model_io.h"
#include "httplib.h"

namespace critrec {

int StatusForError(const std::string &code) {
  if (code == "unknown-entity" || code == "no-such-session") return 404;
  if (code == "redundant-edit") return 409;
  if (code == "invalid-request" || code == "invalid-edit") return 400;
  return 500;
}

nlohmann::json ApiErrorBody(const std::string &code, const std::string &message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

namespace {

void Reply(httplib::Response &res, int status, const nlohmann::json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs a handler and converts failures into the ApiError shape.
template <typename Fn>
httplib::Server::Handler Guard(Fn fn) {
  return [fn](const httplib::Request &req, httplib::Response &res) {
    try {
      Reply(res, 200, fn(req));
    } catch (const Error &e) {
      const int status = StatusForError(e.code());
      // invalid-edit surfaces as a malformed request to clients.
      const std::string code = e.code() == "invalid-edit" ? "invalid-request"
                               : status == 500          ? "internal"
                                                        : e.code();
      Reply(res, status, ApiErrorBody(code, e.what()));
    } catch (const nlohmann::json::exception &e) {
      Reply(res, 400, ApiErrorBody("invalid-request", e.what()));
    } catch (const std::exception &e) {
      Reply(res, 500, ApiErrorBody("internal", e.what()));
    }
  };
}

nlohmann::json ParseBody(const httplib::Request &req) {
  if (req.body.empty()) return nlohmann::json::object();
  nlohmann::json body = nlohmann::json::parse(req.body);
  if (!body.is_object()) throw Error("invalid-request", "body must be a JSON object");
  return body;
}

}  // namespace

void RegisterRoutes(httplib::Server &server, SessionManager &manager, const nlohmann::json &health) {
  SessionManager *m = &manager;
  server.Get("/health", Guard([m, health](const httplib::Request &) {
               nlohmann::json out = health;
               out["status"] = "ok";
               out["sessions"] = m->size();
               return out;
             }));
  server.Get("/keyphrases", Guard([m](const httplib::Request &) { return m->Keyphrases(); }));
  server.Post("/sessions", Guard([m](const httplib::Request &req) {
                nlohmann::json body = ParseBody(req);
                if (!body.contains("user_id") || !body["user_id"].is_string()) {
                  throw Error("invalid-request", "user_id is required");
                }
                const int64_t n = body.value("n_candidates", int64_t{0});
                if (n < 1 && body.contains("n_candidates")) {
                  throw Error("invalid-request", "n_candidates must be at least 1");
                }
                return m->CreateSession(body["user_id"].get<std::string>(), n);
              }));
  server.Get(R"(/sessions/([A-Za-z0-9_-]+))", Guard([m](const httplib::Request &req) {
               return m->GetSession(req.matches[1]);
             }));
  server.Delete(R"(/sessions/([A-Za-z0-9_-]+))", Guard([m](const httplib::Request &req) {
                  m->DeleteSession(req.matches[1]);
                  return nlohmann::json{{"deleted", std::string(req.matches[1])}};
                }));
  server.Post(R"(/sessions/([A-Za-z0-9_-]+)/critique)", Guard([m](const httplib::Request &req) {
                nlohmann::json body = ParseBody(req);
                const nlohmann::json edits =
                    body.contains("edits") ? body["edits"] : nlohmann::json::array();
                return m->SubmitCritique(req.matches[1], m->ParseEdits(edits));
              }));
  server.Post(R"(/sessions/([A-Za-z0-9_-]+)/reset)", Guard([m](const httplib::Request &req) {
                return m->ResetSession(req.matches[1]);
              }));
}

void RunService(const ServiceConfig &config) {
  if (config.top_n < 1) throw Error("invalid-config", "top_n must be at least 1");
  if (!std::filesystem::exists(config.checkpoint)) {
    throw Error("io", "checkpoint not readable: " + config.checkpoint);
  }
  auto engine = std::make_shared<const Engine>(LoadModel(config.checkpoint));
  SessionManagerConfig mc;
  mc.default_candidates = config.top_n;
  mc.critique = config.critique;
  mc.snapshot_dir = config.snapshot_dir;
  SessionManager manager(engine, mc);
  const int64_t restored = manager.RestoreFromDisk();

  httplib::Server server;
  const int threads = config.threads;
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  RegisterRoutes(server, manager,
                 {{"checkpoint", config.checkpoint}, {"corpus", config.corpus}});
  std::cerr << "serving on " << config.host << ":" << config.port << " (" << restored
            << " sessions restored)\n";
  if (!server.listen(config.host, config.port)) {
    throw Error("io", "cannot bind " + config.host + ":" + std::to_string(config.port));
  }
}

}  // namespace critrec
