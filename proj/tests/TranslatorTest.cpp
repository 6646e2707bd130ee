#include <gtest/gtest.h>

#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "TestSupport.h"
#include "qirk/Ir.h"
#include "qirk/Translator.h"

using namespace qirk::nl;

namespace {

TranslatorConfig offline() { return {}; }

// Chat-completions stand-in that replays canned replies.
class MockChat {
 public:
  explicit MockChat(std::vector<std::string> replies) : replies_(std::move(replies)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      requests_.push_back(nlohmann::json::parse(req.body));
      auth_.push_back(req.get_header_value("Authorization"));
      std::string content = replies_.at(std::min(next_++, replies_.size() - 1));
      nlohmann::json reply{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockChat() {
    server_.stop();
    thread_.join();
  }

  TranslatorConfig config(int repairs = 2) const {
    TranslatorConfig c;
    c.mode = TranslatorConfig::Mode::Remote;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
    c.maxRepairAttempts = repairs;
    c.timeout = std::chrono::seconds(5);
    return c;
  }
  std::vector<nlohmann::json> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }
  std::vector<std::string> auth() const {
    std::lock_guard lock(mu_);
    return auth_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
  std::vector<nlohmann::json> requests_;
  std::vector<std::string> auth_;
};

}  // namespace

TEST(Offline, WalkthroughQuestionsMapToListings) {
  for (const auto& l : qirk::test::listings()) {
    auto t = translate(l.question, offline());
    EXPECT_EQ(qirk::ir::parseIr(t.ir), qirk::ir::parseIr(l.ir)) << l.question << "\n" << t.ir;
    EXPECT_EQ(t.attempts, 0);
    EXPECT_EQ(t.rawOutputs.size(), 1u);
  }
}

TEST(Offline, PhrasingVariants) {
  EXPECT_EQ(translate("when was Ada Lovelace born", offline()).ir, R"(X: date_of_birth("Ada Lovelace", X / date))");
  EXPECT_EQ(translate("Name people who won both the Nobel Prize and the \"Fields\" Medal", offline()).ir,
            R"(X: received_award(X, "Nobel Prize"); received_award(X, "\"Fields\" Medal"))");
  EXPECT_EQ(translate("When did Angela Merkel become Chancellor?", offline()).ir,
            R"(Y: X := holds_position("Angela Merkel", "Chancellor"); start_time(X, Y / date))");
  EXPECT_EQ(translate("What is the height of the shortest US president?", offline()).ir,
            R"(MIN(Y): position(X, "President of the United States"); height(X, Y / numeric))");
}

TEST(Offline, UnmatchedQuestion) {
  EXPECT_THROW(translate("colorless green ideas sleep furiously", offline()), NoTemplateMatch);
  EXPECT_THROW(translate("   ", offline()), std::invalid_argument);
}

TEST(Offline, TemplateFileTakesPrecedence) {
  auto path = std::filesystem::temp_directory_path() / "qirk_templates_test.json";
  {
    std::ofstream out(path);
    out << R"J({"templates":[
      {"pattern":"who directed (.+?)\\??", "ir":"X: director(\"$1\", X)"},
      {"pattern":"when was (.+?) born\\??", "ir":"X: birth_date(\"$1\", X / date)"}]})J";
  }
  auto cfg = offline();
  cfg.templatesPath = path;
  EXPECT_EQ(translate("Who directed Eyes Wide Shut?", cfg).ir, R"(X: director("Eyes Wide Shut", X))");
  EXPECT_EQ(translate("When was Alan Turing born?", cfg).ir, R"(X: birth_date("Alan Turing", X / date))");
  EXPECT_THROW(translate("Who directed Eyes Wide Shut?", offline()), NoTemplateMatch);

  {
    std::ofstream out(path);
    out << R"J({"templates":[{"pattern":"(unclosed", "ir":"X: a(X)"}]})J";
  }
  EXPECT_THROW(translate("x", cfg), std::invalid_argument);
  std::filesystem::remove(path);
  EXPECT_THROW(translate("x", cfg), std::invalid_argument);
}

TEST(Offline, TemplateWithBadIrIsReported) {
  TemplateRegistry r;
  r.add({"broken", "X: ("});
  auto hit = r.match("BROKEN");
  ASSERT_TRUE(hit);
  EXPECT_THROW(qirk::ir::parseIr(hit->first), qirk::ir::ParseError);
  EXPECT_FALSE(r.match("broken!"));
}

TEST(Config, Validation) {
  TranslatorConfig c;
  c.mode = TranslatorConfig::Mode::Remote;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.endpoint = "http://localhost:1/x";
  EXPECT_NO_THROW(c.validate());
  c.maxRepairAttempts = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Prompt, ContainsGrammarAndExamples) {
  auto p = systemPrompt("qirk-ir-v1");
  EXPECT_NE(p.find("received_award(X, \"Turing Award\")"), std::string::npos);
  EXPECT_NE(p.find(":="), std::string::npos);
  EXPECT_THROW(systemPrompt("nope"), std::invalid_argument);
}

TEST(Remote, FirstReplyParses) {
  MockChat chat({"```\nX: date_of_birth(\"Alan Turing\", X / date)\n```"});
  ::setenv("QIRK_LLM_TOKEN", "secret-token", 1);
  auto t = translate("When was Alan Turing born?", chat.config());
  ::unsetenv("QIRK_LLM_TOKEN");
  EXPECT_EQ(t.ir, R"(X: date_of_birth("Alan Turing", X / date))");
  EXPECT_EQ(t.attempts, 1);
  ASSERT_EQ(chat.requests().size(), 1u);
  auto req = chat.requests()[0];
  EXPECT_EQ(req["model"], "gpt-3.5-turbo");
  EXPECT_EQ(req["temperature"], 0);
  ASSERT_EQ(req["messages"].size(), 2u);
  EXPECT_EQ(req["messages"][0]["role"], "system");
  EXPECT_EQ(req["messages"][1]["content"], "When was Alan Turing born?");
  EXPECT_EQ(chat.auth()[0], "Bearer secret-token");
}

TEST(Remote, RepairLoopFeedsBackTheError) {
  MockChat chat({"X: date_of_birth(", "X: date_of_birth(\"Alan Turing\", X / date)"});
  auto t = translate("When was Alan Turing born?", chat.config());
  EXPECT_EQ(t.attempts, 2);
  ASSERT_EQ(t.rawOutputs.size(), 2u);
  EXPECT_EQ(t.rawOutputs[0], "X: date_of_birth(");
  auto second = chat.requests().at(1)["messages"];
  ASSERT_EQ(second.size(), 4u);
  EXPECT_EQ(second[2]["role"], "assistant");
  EXPECT_EQ(second[2]["content"], "X: date_of_birth(");
  EXPECT_NE(second[3]["content"].get<std::string>().find("does not parse"), std::string::npos);
  EXPECT_TRUE(chat.auth()[0].empty());
}

TEST(Remote, GivesUpAfterRepairBudget) {
  MockChat chat({"not a query"});
  try {
    translate("anything", chat.config(2));
    FAIL() << "expected TranslationFailed";
  } catch (const TranslationFailed& e) {
    EXPECT_EQ(e.provenance().attempts, 3);
    EXPECT_EQ(e.provenance().rawOutputs, std::vector<std::string>(3, "not a query"));
  }
  EXPECT_EQ(chat.requests().size(), 3u);

  MockChat once({"still not"});
  EXPECT_THROW(translate("anything", once.config(0)), TranslationFailed);
  EXPECT_EQ(once.requests().size(), 1u);
}

TEST(Remote, UnreachableEndpoint) {
  int port;
  {
    httplib::Server s;
    port = s.bind_to_any_port("127.0.0.1");
  }
  TranslatorConfig c;
  c.mode = TranslatorConfig::Mode::Remote;
  c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  c.timeout = std::chrono::seconds(2);
  EXPECT_THROW(translate("When was Alan Turing born?", c), RemoteUnavailable);
  c.endpoint = "not a url";
  EXPECT_THROW(translate("When was Alan Turing born?", c), RemoteUnavailable);
}

TEST(Remote, MalformedReplyIsUnavailable) {
  httplib::Server s;
  s.Post("/chat", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"unexpected":true})", "application/json");
  });
  int port = s.bind_to_any_port("127.0.0.1");
  std::thread t([&] { s.listen_after_bind(); });
  s.wait_until_ready();
  TranslatorConfig c;
  c.mode = TranslatorConfig::Mode::Remote;
  c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/chat";
  EXPECT_THROW(translate("q", c), RemoteUnavailable);
  s.stop();
  t.join();
}
