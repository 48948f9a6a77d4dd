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

#include "critrec/service/session_manager.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "critrec/common/error.h"

namespace critrec {

namespace fs = std::filesystem;

namespace {

std::string FormatId(int64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%06lld", static_cast<long long>(n));
  return buf;
}

}  // namespace

SessionManager::SessionManager(std::shared_ptr<const Engine> engine, SessionManagerConfig config)
    : engine_(std::move(engine)), config_(std::move(config)) {
  config_.critique.Validate();
  if (config_.default_candidates < 1) {
    throw Error("invalid-config", "default_candidates must be at least 1");
  }
  if (!config_.snapshot_dir.empty()) fs::create_directories(config_.snapshot_dir);
}

std::shared_ptr<SessionManager::Entry> SessionManager::Find(const std::string &session_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error("no-such-session", session_id);
  return it->second;
}

size_t SessionManager::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

nlohmann::json SessionManager::View(const CritiqueSession &s) const {
  const KeyphraseVocabulary &kv = engine_->bundle().keyphrases;
  nlohmann::json recs = nlohmann::json::array();
  for (size_t r = 0; r < s.ranking.size(); ++r) {
    const int64_t c = s.ranking[r];
    const Explanation &e = s.explanations[c];
    nlohmann::json chips = nlohmann::json::array();
    for (int64_t k : TopIndices(e.keyphrase_probs, static_cast<int64_t>(e.keyphrase_probs.size()))) {
      if (!e.keyphrase_set[k]) continue;
      chips.push_back({{"index", k}, {"phrase", kv[k].phrase}, {"aspect", kv[k].aspect},
                       {"probability", e.keyphrase_probs[k]}});
    }
    std::string text;
    for (const std::string &w : engine_->DecodeTokens(e.justification)) {
      text += text.empty() ? w : " " + w;
    }
    recs.push_back({{"rank", r + 1},
                    {"item_id", s.candidates[c]},
                    {"score", e.rating},
                    {"keyphrases", chips},
                    {"justification", text}});
  }
  const Explanation &top = s.TopExplanation();
  nlohmann::json chips = nlohmann::json::array();
  for (size_t k = 0; k < kv.size(); ++k) {
    chips.push_back({{"index", k}, {"phrase", kv[k].phrase}, {"aspect", kv[k].aspect},
                     {"on", top.keyphrase_set[k] != 0}});
  }
  nlohmann::json history = nlohmann::json::array();
  for (const CritiqueRecord &h : s.history) {
    history.push_back({{"action", h.action}, {"keyphrase", h.keyphrase},
                       {"phrase", kv[h.keyphrase].phrase}, {"timestamp", h.timestamp},
                       {"round", h.round}});
  }
  return {{"session_id", s.session_id}, {"user_id", s.user_id}, {"rounds", s.rounds},
          {"recommendations", recs},    {"chips", chips},       {"history", history}};
}

void SessionManager::Persist(const CritiqueSession &session, nlohmann::json event) const {
  if (config_.snapshot_dir.empty()) return;
  event["snapshot"] = SessionSnapshot(session);
  const fs::path path = fs::path(config_.snapshot_dir) / (session.session_id + ".jsonl");
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("io", "cannot append to " + path.string());
  out << event.dump() << '\n';
  out.flush();
  if (!out) throw Error("io", "write failed for " + path.string());
}

nlohmann::json SessionManager::CreateSession(const std::string &user_id, int64_t n_candidates) {
  if (n_candidates < 0) throw Error("invalid-request", "n_candidates must be positive");
  const int64_t n = n_candidates == 0 ? config_.default_candidates : n_candidates;
  const std::vector<std::string> &catalog = engine_->bundle().items.ids();
  std::vector<std::string> candidates;
  for (const Recommendation &r : engine_->RecommendTopN(user_id, catalog, n, false)) {
    candidates.push_back(r.item_id);
  }
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    id = FormatId(next_id_++);
  }
  auto entry = std::make_shared<Entry>();
  entry->session = StartSession(*engine_, id, user_id, candidates, config_.session);
  nlohmann::json view = View(entry->session);
  Persist(entry->session, {{"event", "create"}});
  std::lock_guard<std::mutex> lock(mu_);
  sessions_[id] = entry;
  return view;
}

nlohmann::json SessionManager::GetSession(const std::string &session_id) {
  auto entry = Find(session_id);
  std::lock_guard<std::mutex> lock(entry->mu);
  return View(entry->session);
}

nlohmann::json SessionManager::SubmitCritique(const std::string &session_id,
                                              const std::vector<KeyphraseEdit> &edits) {
  auto entry = Find(session_id);
  std::lock_guard<std::mutex> lock(entry->mu);
  // Work on a copy so a failed request leaves the session untouched.
  CritiqueSession next = entry->session;
  RerankOutcome outcome =
      RerankAfterCritique(*engine_, next, edits, config_.critique, config_.session);
  nlohmann::json items = nlohmann::json::array();
  for (size_t c = 0; c < outcome.traces.size(); ++c) {
    const CritiqueTrace &t = outcome.traces[c];
    items.push_back({{"item_id", next.candidates[c]},
                     {"converged", t.converged},
                     {"iterations", t.iterations},
                     {"final_gap", t.gaps.empty() ? 0.0 : t.gaps.back()},
                     {"stop_reason", t.stop_reason}});
  }
  nlohmann::json edits_json = nlohmann::json::array();
  for (const KeyphraseEdit &e : edits) {
    edits_json.push_back({{"keyphrase", e.keyphrase}, {"action", EditActionName(e.action)}});
  }
  Persist(next, {{"event", "critique"}, {"edits", edits_json}});
  entry->session = std::move(next);
  nlohmann::json view = View(entry->session);
  view["critique"] = {{"target", outcome.critique_vector}, {"items", items}};
  return view;
}

nlohmann::json SessionManager::ResetSession(const std::string &session_id) {
  auto entry = Find(session_id);
  std::lock_guard<std::mutex> lock(entry->mu);
  nlohmann::json archived = SessionSnapshot(entry->session)["history"];
  CritiqueSession next = entry->session;
  critrec::ResetSession(*engine_, next, config_.session);
  Persist(next, {{"event", "reset"}, {"archived_history", archived}});
  entry->session = std::move(next);
  return View(entry->session);
}

void SessionManager::DeleteSession(const std::string &session_id) {
  std::lock_guard<std::mutex> lock(mu_);
  if (sessions_.erase(session_id) == 0) throw Error("no-such-session", session_id);
  if (!config_.snapshot_dir.empty()) {
    const fs::path log = fs::path(config_.snapshot_dir) / (session_id + ".jsonl");
    std::ofstream out(log, std::ios::app);
    out << nlohmann::json{{"event", "delete"}}.dump() << '\n';
  }
}

nlohmann::json SessionManager::Keyphrases() const {
  nlohmann::json out = nlohmann::json::array();
  const KeyphraseVocabulary &kv = engine_->bundle().keyphrases;
  for (size_t k = 0; k < kv.size(); ++k) {
    out.push_back({{"index", k}, {"phrase", kv[k].phrase}, {"aspect", kv[k].aspect}});
  }
  return {{"keyphrases", out}};
}

std::vector<KeyphraseEdit> SessionManager::ParseEdits(const nlohmann::json &edits) const {
  if (!edits.is_array()) throw Error("invalid-request", "edits must be an array");
  const KeyphraseVocabulary &kv = engine_->bundle().keyphrases;
  std::vector<KeyphraseEdit> out;
  for (const nlohmann::json &e : edits) {
    if (!e.is_object() || !e.contains("keyphrase") || !e.contains("action") ||
        !e.at("action").is_string()) {
      throw Error("invalid-request", "each edit needs keyphrase and action");
    }
    KeyphraseEdit edit;
    const nlohmann::json &k = e.at("keyphrase");
    if (k.is_number_integer()) {
      edit.keyphrase = k.get<int64_t>();
    } else if (k.is_string()) {
      auto idx = kv.IndexOf(k.get<std::string>());
      if (!idx) throw Error("invalid-request", "unknown keyphrase " + k.get<std::string>());
      edit.keyphrase = static_cast<int64_t>(*idx);
    } else {
      throw Error("invalid-request", "keyphrase must be an index or a phrase");
    }
    if (edit.keyphrase < 0 || edit.keyphrase >= static_cast<int64_t>(kv.size())) {
      throw Error("invalid-request", "keyphrase index out of range");
    }
    const std::string action = e.at("action").get<std::string>();
    if (action != "add" && action != "remove") {
      throw Error("invalid-request", "action must be add or remove");
    }
    edit.action = ParseEditAction(action);
    out.push_back(edit);
  }
  return out;
}

int64_t SessionManager::RestoreFromDisk() {
  if (config_.snapshot_dir.empty()) return 0;
  std::vector<fs::path> logs;
  for (const auto &f : fs::directory_iterator(config_.snapshot_dir)) {
    if (f.path().extension() == ".jsonl") logs.push_back(f.path());
  }
  std::sort(logs.begin(), logs.end());
  int64_t restored = 0;
  for (const fs::path &log : logs) {
    std::ifstream in(log);
    std::string line, last;
    while (std::getline(in, line)) {
      if (!line.empty()) last = line;
    }
    if (last.empty()) continue;
    nlohmann::json event = nlohmann::json::parse(last);
    if (event.value("event", "") == "delete") continue;
    auto entry = std::make_shared<Entry>();
    entry->session = RestoreSession(*engine_, event.at("snapshot"), config_.session);
    const std::string id = entry->session.session_id;
    std::lock_guard<std::mutex> lock(mu_);
    if (id.size() > 1 && id[0] == 's') {
      next_id_ = std::max<int64_t>(next_id_, std::stoll(id.substr(1)) + 1);
    }
    sessions_[id] = entry;
    ++restored;
  }
  return restored;
}

}  // namespace critrec
