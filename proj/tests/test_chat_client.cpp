#include <doctest/doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mei/chat_client.hpp"
#include "mei/errors.hpp"

using namespace mei;

namespace {

ChatRequest simple_request(const std::string& content) {
  ChatRequest r;
  r.messages.push_back({"system", "instructions"});
  r.messages.push_back({"user", content});
  return r;
}

/// In-process chat endpoint with a swappable handler.
struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit LocalServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    thread.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port); }
};

std::string completion_json(const std::string& content, const std::string& finish = "stop") {
  nlohmann::json j;
  j["choices"] = nlohmann::json::array();
  j["choices"].push_back(
      {{"message", {{"role", "assistant"}, {"content", content}}}, {"finish_reason", finish}});
  return j.dump();
}

HttpChatOptions local_options(const LocalServer& server, int max_retries = 1) {
  HttpChatOptions opt;
  opt.endpoint = server.endpoint();
  opt.model = "test-model";
  opt.api_key = "sekrit";
  opt.max_retries = max_retries;
  opt.timeout_seconds = 5;
  return opt;
}

}  // namespace

TEST_CASE("chat_request_hash keys on every request ingredient") {
  ChatRequest a = simple_request("hello");
  CHECK(chat_request_hash(a).size() == 16);
  CHECK(chat_request_hash(a) == chat_request_hash(a));

  ChatRequest b = simple_request("hello!");
  CHECK(chat_request_hash(a) != chat_request_hash(b));

  ChatRequest role = a;
  role.messages[1].role = "assistant";
  CHECK(chat_request_hash(a) != chat_request_hash(role));

  ChatRequest temp = a;
  temp.temperature = 0.5;
  CHECK(chat_request_hash(a) != chat_request_hash(temp));

  ChatRequest budget = a;
  budget.max_tokens = 128;
  CHECK(chat_request_hash(a) != chat_request_hash(budget));

  ChatRequest split;
  split.messages.push_back({"system", "instruct"});
  split.messages.push_back({"user", "ionshello"});
  CHECK(chat_request_hash(a) != chat_request_hash(split));
}

TEST_CASE("Cassette stores and retrieves by request hash") {
  Cassette cassette;
  ChatRequest r1 = simple_request("one");
  ChatRequest r2 = simple_request("two");
  cassette.add(r1, "reply one");
  CHECK(cassette.size() == 1);
  REQUIRE(cassette.find(r1) != nullptr);
  CHECK(*cassette.find(r1) == "reply one");
  CHECK(cassette.find(r2) == nullptr);

  SUBCASE("save and load round trip") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "mei_test_cassette.jsonl";
    cassette.add(r2, "reply two\nwith a newline");
    cassette.save(path.string());
    Cassette loaded = Cassette::load(path.string());
    CHECK(loaded.size() == 2);
    REQUIRE(loaded.find(r2) != nullptr);
    CHECK(*loaded.find(r2) == "reply two\nwith a newline");
    fs::remove(path);
  }
  SUBCASE("load failures") {
    CHECK_THROWS_AS(Cassette::load("/nonexistent/cassette.jsonl"), Error);
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "mei_test_cassette_bad.jsonl";
    std::ofstream(path.string()) << "{\"request_hash\":\"x\",\"reply\":\"y\"}\n{oops\n";
    CHECK_THROWS_AS(Cassette::load(path.string()), MalformedLine);
    fs::remove(path);
  }
}

TEST_CASE("FixtureChatClient replay answers from the cassette only") {
  Cassette cassette;
  ChatRequest hit = simple_request("known");
  cassette.add(hit, "canned");
  FixtureChatClient client(FixtureChatClient::Mode::kReplay, std::move(cassette));

  CHECK(client.complete(hit) == "canned");
  ChatRequest miss = simple_request("unknown");
  try {
    client.complete(miss);
    FAIL("expected ClientError");
  } catch (const ClientError& e) {
    CHECK(e.status == 0);
  }
}

TEST_CASE("FixtureChatClient record mode delegates misses once") {
  std::atomic<int> calls{0};
  auto inner = std::make_unique<FunctionChatClient>([&](const ChatRequest& r) {
    ++calls;
    return "echo: " + r.messages.back().content;
  });
  FixtureChatClient client(FixtureChatClient::Mode::kRecord, Cassette{}, std::move(inner));

  ChatRequest r = simple_request("ping");
  CHECK(client.complete(r) == "echo: ping");
  CHECK(client.complete(r) == "echo: ping");
  CHECK(calls == 1);
  CHECK(client.cassette().size() == 1);

  SUBCASE("record mode requires an inner client") {
    CHECK_THROWS_AS(FixtureChatClient(FixtureChatClient::Mode::kRecord, Cassette{}),
                    ConfigError);
  }
}

TEST_CASE("HttpChatClient validates its configuration") {
  HttpChatOptions opt;
  opt.model = "m";
  CHECK_THROWS_AS(HttpChatClient{opt}, ConfigError);
  opt.endpoint = "http://localhost:1";
  opt.model = "";
  CHECK_THROWS_AS(HttpChatClient{opt}, ConfigError);
}

TEST_CASE("HttpChatClient speaks the chat-completions protocol") {
  SUBCASE("success round trip carries the full payload") {
    nlohmann::json seen_body;
    std::string seen_auth;
    LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
      seen_body = nlohmann::json::parse(req.body);
      seen_auth = req.get_header_value("Authorization");
      res.set_content(completion_json("pong"), "application/json");
    });
    HttpChatClient client(local_options(server));
    ChatRequest request = simple_request("ping");
    request.max_tokens = 77;
    CHECK(client.complete(request) == "pong");
    CHECK(seen_auth == "Bearer sekrit");
    CHECK(seen_body["model"] == "test-model");
    CHECK(seen_body["temperature"] == 0.0);
    CHECK(seen_body["max_tokens"] == 77);
    REQUIRE(seen_body["messages"].size() == 2);
    CHECK(seen_body["messages"][0]["role"] == "system");
    CHECK(seen_body["messages"][1]["content"] == "ping");
  }
  SUBCASE("retries 5xx and 429 with backoff") {
    std::atomic<int> hits{0};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
      int n = ++hits;
      if (n == 1) {
        res.status = 500;
      } else if (n == 2) {
        res.status = 429;
      } else {
        res.set_content(completion_json("finally"), "application/json");
      }
    });
    HttpChatClient client(local_options(server, 3));
    CHECK(client.complete(simple_request("x")) == "finally");
    CHECK(hits == 3);
  }
  SUBCASE("exhausted retries surface the last status") {
    std::atomic<int> hits{0};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 503;
    });
    HttpChatClient client(local_options(server, 1));
    try {
      client.complete(simple_request("x"));
      FAIL("expected ClientError");
    } catch (const ClientError& e) {
      CHECK(e.status == 503);
    }
    CHECK(hits == 2);
  }
  SUBCASE("client errors do not retry") {
    std::atomic<int> hits{0};
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 400;
      res.set_content("bad request", "text/plain");
    });
    HttpChatClient client(local_options(server, 3));
    try {
      client.complete(simple_request("x"));
      FAIL("expected ClientError");
    } catch (const ClientError& e) {
      CHECK(e.status == 400);
    }
    CHECK(hits == 1);
  }
  SUBCASE("a truncated completion raises BudgetExceeded") {
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
      res.set_content(completion_json("cut off", "length"), "application/json");
    });
    HttpChatClient client(local_options(server));
    CHECK_THROWS_AS(client.complete(simple_request("x")), BudgetExceeded);
  }
  SUBCASE("malformed completion bodies raise ClientError") {
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"choices\": []}", "application/json");
    });
    HttpChatClient client(local_options(server));
    CHECK_THROWS_AS(client.complete(simple_request("x")), ClientError);
  }
  SUBCASE("a missing message content raises ClientError") {
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"choices\": [{\"finish_reason\": \"stop\"}]}", "application/json");
    });
    HttpChatClient client(local_options(server));
    CHECK_THROWS_AS(client.complete(simple_request("x")), ClientError);
  }
}
