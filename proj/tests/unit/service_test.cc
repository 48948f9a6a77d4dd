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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "critrec/common/error.h"
#include "critrec/service/http_service.h"
#include "critrec/service/session_manager.h"
#include "httplib.h"
#include "test_util.h"

namespace critrec {
namespace {

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    testing::ToyPipeline p = testing::BuildToyPipeline();
    engine_ = new std::shared_ptr<const Engine>(
        std::make_shared<const Engine>(testing::BuildToyBundle(p, true)));
  }
  static void TearDownTestSuite() { delete engine_; }
  static std::shared_ptr<const Engine> engine() { return *engine_; }
  static std::string User(int64_t i) { return engine()->bundle().users.Id(i); }

  SessionManagerConfig Config(const std::string &dir = "") const {
    SessionManagerConfig c;
    c.default_candidates = 8;
    c.snapshot_dir = dir;
    return c;
  }

  // Index of the first displayed chip of the top item.
  static int64_t FirstOnChip(const nlohmann::json &view) {
    for (const nlohmann::json &chip : view["chips"]) {
      if (chip["on"].get<bool>()) return chip["index"].get<int64_t>();
    }
    return -1;
  }

 private:
  static inline std::shared_ptr<const Engine> *engine_ = nullptr;
};

std::string ErrorCode(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "none";
}

TEST_F(ServiceTest, CreateReturnsRankedViewWithChips) {
  SessionManager m(engine(), Config());
  nlohmann::json v = m.CreateSession(User(0), 5);
  EXPECT_EQ(v["session_id"], "s000001");
  ASSERT_EQ(v["recommendations"].size(), 5u);
  for (size_t r = 1; r < 5; ++r) {
    EXPECT_GE(v["recommendations"][r - 1]["score"].get<double>(),
              v["recommendations"][r]["score"].get<double>());
  }
  EXPECT_EQ(v["chips"].size(), engine()->bundle().keyphrases.size());
  int on = 0;
  for (const nlohmann::json &chip : v["chips"]) {
    EXPECT_TRUE(chip.contains("phrase") && chip.contains("aspect"));
    on += chip["on"].get<bool>();
  }
  EXPECT_EQ(on, engine()->hyper().display_keyphrases);
  EXPECT_FALSE(v["recommendations"][0]["justification"].get<std::string>().empty());
  EXPECT_TRUE(v["history"].empty());
}

TEST_F(ServiceTest, ListLengthIsCappedByCatalog) {
  SessionManager m(engine(), Config());
  const size_t catalog = engine()->bundle().items.size();
  EXPECT_EQ(m.CreateSession(User(1), 1000)["recommendations"].size(), catalog);
  EXPECT_EQ(m.CreateSession(User(1), 0)["recommendations"].size(), 8u);
}

TEST_F(ServiceTest, SessionsAreIndependent) {
  SessionManager m(engine(), Config());
  nlohmann::json a = m.CreateSession(User(3), 6), b = m.CreateSession(User(3), 6);
  EXPECT_NE(a["session_id"], b["session_id"]);
  m.SubmitCritique(a["session_id"], {{FirstOnChip(a), EditAction::kRemove}});
  EXPECT_EQ(m.GetSession(a["session_id"])["history"].size(), 1u);
  EXPECT_EQ(m.GetSession(b["session_id"]), b);
}

TEST_F(ServiceTest, ErrorsUseClosedCodes) {
  SessionManager m(engine(), Config());
  EXPECT_EQ(ErrorCode([&] { m.CreateSession("nobody", 3); }), "unknown-entity");
  EXPECT_EQ(ErrorCode([&] { m.GetSession("s999999"); }), "no-such-session");
  nlohmann::json v = m.CreateSession(User(0), 4);
  int64_t off = -1;
  for (const nlohmann::json &chip : v["chips"]) {
    if (!chip["on"].get<bool>()) off = chip["index"];
  }
  EXPECT_EQ(ErrorCode([&] { m.SubmitCritique(v["session_id"], {{off, EditAction::kRemove}}); }),
            "redundant-edit");
  m.DeleteSession(v["session_id"]);
  EXPECT_EQ(ErrorCode([&] { m.GetSession(v["session_id"]); }), "no-such-session");
}

TEST_F(ServiceTest, CritiqueFlowHistoryAndReset) {
  SessionManager m(engine(), Config());
  nlohmann::json v = m.CreateSession(User(4), 8);
  const std::string id = v["session_id"];
  // Empty edits keep the ranking.
  nlohmann::json same = m.SubmitCritique(id, {});
  EXPECT_EQ(same["recommendations"], v["recommendations"]);

  const int64_t k = FirstOnChip(v);
  nlohmann::json after = m.SubmitCritique(id, {{k, EditAction::kRemove}});
  EXPECT_EQ(after["critique"]["target"][k], 0);
  ASSERT_EQ(after["critique"]["items"].size(), 8u);
  for (const nlohmann::json &item : after["critique"]["items"]) {
    EXPECT_TRUE(item.contains("converged"));
    EXPECT_LE(item["iterations"].get<int64_t>(), 50);
  }
  const int64_t k2 = FirstOnChip(after);
  m.SubmitCritique(id, {{k2, EditAction::kRemove}});
  nlohmann::json state = m.GetSession(id);
  ASSERT_EQ(state["history"].size(), 2u);
  EXPECT_EQ(state["history"][0]["keyphrase"], k);
  EXPECT_EQ(state["history"][1]["keyphrase"], k2);

  nlohmann::json reset = m.ResetSession(id);
  EXPECT_EQ(reset["recommendations"], v["recommendations"]);
  EXPECT_TRUE(reset["history"].empty());
  // Same critiques after a reset follow the same trajectory.
  EXPECT_EQ(m.SubmitCritique(id, {{k, EditAction::kRemove}}), after);
}

TEST_F(ServiceTest, EditsParseIndexOrPhrase) {
  SessionManager m(engine(), Config());
  const std::string phrase = engine()->bundle().keyphrases[2].phrase;
  auto edits = m.ParseEdits(nlohmann::json::array(
      {{{"keyphrase", 1}, {"action", "add"}}, {{"keyphrase", phrase}, {"action", "remove"}}}));
  ASSERT_EQ(edits.size(), 2u);
  EXPECT_EQ(edits[0], (KeyphraseEdit{1, EditAction::kAdd}));
  EXPECT_EQ(edits[1], (KeyphraseEdit{2, EditAction::kRemove}));
  EXPECT_EQ(ErrorCode([&] { m.ParseEdits({{{"keyphrase", 999}, {"action", "add"}}}); }),
            "invalid-request");
  EXPECT_EQ(ErrorCode([&] { m.ParseEdits({{{"keyphrase", "zzz"}, {"action", "add"}}}); }),
            "invalid-request");
  EXPECT_EQ(ErrorCode([&] { m.ParseEdits({{{"keyphrase", 1}, {"action", "flip"}}}); }),
            "invalid-request");
}

TEST_F(ServiceTest, ModelParamsNeverChange) {
  const uint64_t before = engine()->network().params().Checksum();
  SessionManager m(engine(), Config());
  nlohmann::json v = m.CreateSession(User(5), 8);
  m.SubmitCritique(v["session_id"], {{FirstOnChip(v), EditAction::kRemove}});
  m.ResetSession(v["session_id"]);
  EXPECT_EQ(engine()->network().params().Checksum(), before);
}

TEST_F(ServiceTest, SnapshotRestoreReplaysByteIdentically) {
  testing::TempDir dir("snapshots");
  std::string id, after_json, replay_json;
  int64_t k2 = -1;
  {
    SessionManager m(engine(), Config(dir.path()));
    nlohmann::json v = m.CreateSession(User(6), 8);
    id = v["session_id"];
    nlohmann::json after = m.SubmitCritique(id, {{FirstOnChip(v), EditAction::kRemove}});
    k2 = FirstOnChip(after);
    replay_json = m.SubmitCritique(id, {{k2, EditAction::kRemove}}).dump();
    after_json = m.GetSession(id).dump();
  }
  SessionManager restored(engine(), Config(dir.path()));
  EXPECT_EQ(restored.RestoreFromDisk(), 1);
  EXPECT_EQ(restored.GetSession(id).dump(), after_json);
  // New ids continue after the restored ones.
  EXPECT_EQ(restored.CreateSession(User(6), 2)["session_id"], "s000002");

  // Restoring the state before the second critique and replaying it gives
  // the identical response.
  testing::TempDir dir2("snapshots_replay");
  {
    std::ifstream in(dir / (id + ".jsonl"));
    std::ofstream out(dir2 / (id + ".jsonl"));
    std::string line;
    std::getline(in, line);
    out << line << '\n';
    std::getline(in, line);
    out << line << '\n';
  }
  SessionManager replay(engine(), Config(dir2.path()));
  ASSERT_EQ(replay.RestoreFromDisk(), 1);
  EXPECT_EQ(replay.SubmitCritique(id, {{k2, EditAction::kRemove}}).dump(), replay_json);
}

TEST_F(ServiceTest, ResetArchivesHistoryInSnapshotLog) {
  testing::TempDir dir("archive");
  SessionManager m(engine(), Config(dir.path()));
  nlohmann::json v = m.CreateSession(User(7), 5);
  const std::string id = v["session_id"];
  m.SubmitCritique(id, {{FirstOnChip(v), EditAction::kRemove}});
  m.ResetSession(id);
  std::ifstream in(dir / (id + ".jsonl"));
  std::vector<nlohmann::json> events;
  for (std::string line; std::getline(in, line);) events.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(events[0]["event"], "create");
  EXPECT_EQ(events[1]["event"], "critique");
  EXPECT_EQ(events[2]["event"], "reset");
  EXPECT_EQ(events[2]["archived_history"].size(), 1u);
  EXPECT_TRUE(events[2]["snapshot"]["history"].empty());
}

TEST_F(ServiceTest, ConcurrentRequestsOnOneSessionSerialize) {
  SessionManager m(engine(), Config());
  nlohmann::json v = m.CreateSession(User(8), 6);
  const std::string id = v["session_id"];
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 3; ++i) {
        nlohmann::json cur = m.GetSession(id);
        try {
          m.SubmitCritique(id, {{FirstOnChip(cur), EditAction::kRemove}});
          ++ok;
        } catch (const Error &e) {
          // Another writer may have removed that chip first.
          EXPECT_EQ(e.code(), "redundant-edit");
        }
      }
    });
  }
  for (std::thread &t : threads) t.join();
  nlohmann::json state = m.GetSession(id);
  EXPECT_EQ(static_cast<int>(state["history"].size()), ok.load());
  EXPECT_EQ(state["rounds"].get<int>(), ok.load());
}

TEST_F(ServiceTest, GoldenTopThree) {
  SessionManager m(engine(), Config());
  nlohmann::json v = m.CreateSession(User(0), 3);
  std::vector<std::string> ids;
  for (const nlohmann::json &r : v["recommendations"]) ids.push_back(r["item_id"]);
  // Frozen from the toy corpus and one training epoch at seed 1.
  EXPECT_EQ(ids, (std::vector<std::string>{"i0008", "i0017", "i0001"})) << nlohmann::json(ids).dump();
}

TEST(ErrorMapping, StatusCodes) {
  EXPECT_EQ(StatusForError("unknown-entity"), 404);
  EXPECT_EQ(StatusForError("no-such-session"), 404);
  EXPECT_EQ(StatusForError("redundant-edit"), 409);
  EXPECT_EQ(StatusForError("invalid-request"), 400);
  EXPECT_EQ(StatusForError("anything-else"), 500);
}

TEST_F(ServiceTest, HttpRoundTrip) {
  SessionManager m(engine(), Config());
  httplib::Server server;
  RegisterRoutes(server, m, {{"checkpoint", "toy"}});
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(nlohmann::json::parse(health->body)["status"], "ok");

  auto kps = client.Get("/keyphrases");
  ASSERT_TRUE(kps);
  EXPECT_EQ(nlohmann::json::parse(kps->body)["keyphrases"].size(),
            engine()->bundle().keyphrases.size());

  auto created = client.Post("/sessions", nlohmann::json{{"user_id", User(2)}, {"n_candidates", 5}}.dump(),
                             "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 200);
  nlohmann::json view = nlohmann::json::parse(created->body);
  const std::string id = view["session_id"];

  const int64_t k = FirstOnChip(view);
  auto critiqued = client.Post("/sessions/" + id + "/critique",
                               nlohmann::json{{"edits", {{{"keyphrase", k}, {"action", "remove"}}}}}.dump(),
                               "application/json");
  ASSERT_TRUE(critiqued);
  EXPECT_EQ(critiqued->status, 200);
  EXPECT_EQ(nlohmann::json::parse(critiqued->body)["history"].size(), 1u);

  auto redundant = client.Post("/sessions/" + id + "/critique",
                               nlohmann::json{{"edits", {{{"keyphrase", k}, {"action", "remove"}}}}}.dump(),
                               "application/json");
  ASSERT_TRUE(redundant);
  // k may be displayed again after reranking; only check the shape then.
  if (redundant->status != 200) {
    EXPECT_EQ(redundant->status, 409);
    EXPECT_EQ(nlohmann::json::parse(redundant->body)["error"]["code"], "redundant-edit");
  }

  auto got = client.Get("/sessions/" + id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->status, 200);

  auto reset = client.Post("/sessions/" + id + "/reset", "", "application/json");
  ASSERT_TRUE(reset);
  EXPECT_EQ(nlohmann::json::parse(reset->body)["recommendations"], view["recommendations"]);

  auto missing = client.Get("/sessions/s424242");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(nlohmann::json::parse(missing->body)["error"]["code"], "no-such-session");

  auto unknown = client.Post("/sessions", R"({"user_id": "nobody"})", "application/json");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
  EXPECT_EQ(nlohmann::json::parse(unknown->body)["error"]["code"], "unknown-entity");

  auto malformed = client.Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(malformed);
  EXPECT_EQ(malformed->status, 400);

  auto deleted = client.Delete("/sessions/" + id);
  ASSERT_TRUE(deleted);
  EXPECT_EQ(deleted->status, 200);
  EXPECT_EQ(client.Get("/sessions/" + id)->status, 404);

  server.stop();
  th.join();
}

}  // namespace
}  // namespace critrec
