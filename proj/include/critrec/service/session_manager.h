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

#ifndef CRITREC_SERVICE_SESSION_MANAGER_H_
#define CRITREC_SERVICE_SESSION_MANAGER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "critrec/critique/session.h"
#include "json.hpp"

namespace critrec {

struct SessionManagerConfig {
  int64_t default_candidates = 20;
  CritiqueParams critique;
  SessionOptions session;
  // Directory for write-through snapshot logs; empty keeps sessions in memory.
  std::string snapshot_dir;
};

// Owns live critiquing sessions. Requests to one session are serialized;
// different sessions proceed concurrently over the shared read-only engine.
// All methods return the JSON bodies served over HTTP and throw
// critrec::Error on failure.
class SessionManager {
 public:
  SessionManager(std::shared_ptr<const Engine> engine, SessionManagerConfig config);

  // Candidates are the user's top n_candidates catalog items (0 = default).
  nlohmann::json CreateSession(const std::string &user_id, int64_t n_candidates);
  nlohmann::json GetSession(const std::string &session_id);
  nlohmann::json SubmitCritique(const std::string &session_id,
                                const std::vector<KeyphraseEdit> &edits);
  nlohmann::json ResetSession(const std::string &session_id);
  void DeleteSession(const std::string &session_id);
  nlohmann::json Keyphrases() const;

  // Accepts {"keyphrase": index or phrase, "action": "add" | "remove"}
  // entries. Throws Error("invalid-request").
  std::vector<KeyphraseEdit> ParseEdits(const nlohmann::json &edits) const;

  // Loads the latest snapshot of every log in the snapshot directory.
  int64_t RestoreFromDisk();
  size_t size() const;
  const Engine &engine() const { return *engine_; }

 private:
  struct Entry {
    std::mutex mu;
    CritiqueSession session;
  };

  std::shared_ptr<Entry> Find(const std::string &session_id) const;
  nlohmann::json View(const CritiqueSession &session) const;
  void Persist(const CritiqueSession &session, nlohmann::json event) const;

  std::shared_ptr<const Engine> engine_;
  SessionManagerConfig config_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  int64_t next_id_ = 1;
};

}  // namespace critrec

#endif  // CRITREC_SERVICE_SESSION_MANAGER_H_
