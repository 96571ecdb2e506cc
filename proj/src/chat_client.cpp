#include "mei/chat_client.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mei/errors.hpp"
#include "mei/jsonl.hpp"

namespace mei {

namespace {

nlohmann::ordered_json request_body(const ChatRequest& request, const std::string& model) {
  nlohmann::ordered_json body;
  body["model"] = model;
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    nlohmann::ordered_json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    messages.push_back(std::move(msg));
  }
  body["messages"] = std::move(messages);
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  return body;
}

std::uint64_t fnv1a_append(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= 0xff;
  h *= 1099511628211ull;
  return h;
}

}  // namespace

std::string chat_request_hash(const ChatRequest& request) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& m : request.messages) {
    h = fnv1a_append(h, m.role);
    h = fnv1a_append(h, m.content);
  }
  char suffix[64];
  std::snprintf(suffix, sizeof(suffix), "t%.6f|n%d", request.temperature, request.max_tokens);
  h = fnv1a_append(h, suffix);
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

HttpChatClient::HttpChatClient(HttpChatOptions options) : options_(std::move(options)) {
  if (options_.endpoint.empty()) throw ConfigError("chat endpoint must be set for live mode");
  if (options_.model.empty()) throw ConfigError("chat model must be set for live mode");
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  const std::string payload = request_body(request, options_.model).dump();

  int last_status = 0;
  std::string last_detail;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(250 * (1 << (attempt - 1))));
    }
    httplib::Client client(options_.endpoint);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!options_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + options_.api_key);
    }
    auto res = client.Post(options_.path, headers, payload, "application/json");
    if (!res) {
      last_status = 0;
      last_detail = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_status = res->status;
      last_detail = res->body;
      continue;
    }
    if (res->status != 200) throw ClientError(res->status, res->body);

    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() ||
        j["choices"].empty()) {
      throw ClientError(res->status, "malformed completion response");
    }
    const auto& choice = j["choices"][0];
    if (choice.value("finish_reason", "") == "length") {
      throw BudgetExceeded("completion truncated at max_tokens=" +
                           std::to_string(request.max_tokens));
    }
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
      throw ClientError(res->status, "completion response lacks message content");
    }
    return choice["message"]["content"].get<std::string>();
  }
  throw ClientError(last_status, "retries exhausted: " + last_detail);
}

Cassette Cassette::load(const std::string& path) {
  Cassette cassette;
  std::ifstream in(path);
  if (!in) throw Error("cannot open cassette: " + path);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("request_hash") ||
        !j.contains("reply")) {
      throw MalformedLine(line_number, "invalid cassette entry");
    }
    Entry e;
    e.request_hash = j["request_hash"].get<std::string>();
    e.reply = j["reply"].get<std::string>();
    for (const auto& m : j.value("messages", nlohmann::json::array())) {
      e.messages.push_back(ChatMessage{m.value("role", ""), m.value("content", "")});
    }
    cassette.entries_.push_back(std::move(e));
  }
  return cassette;
}

void Cassette::save(const std::string& path) const {
  std::string out;
  for (const auto& e : entries_) {
    nlohmann::ordered_json j;
    j["request_hash"] = e.request_hash;
    nlohmann::ordered_json messages = nlohmann::ordered_json::array();
    for (const auto& m : e.messages) {
      nlohmann::ordered_json msg;
      msg["role"] = m.role;
      msg["content"] = m.content;
      messages.push_back(std::move(msg));
    }
    j["messages"] = std::move(messages);
    j["reply"] = e.reply;
    out += j.dump();
    out += '\n';
  }
  write_file(path, out);
}

void Cassette::add(const ChatRequest& request, const std::string& reply) {
  Entry e;
  e.request_hash = chat_request_hash(request);
  e.messages = request.messages;
  e.reply = reply;
  entries_.push_back(std::move(e));
}

const std::string* Cassette::find(const ChatRequest& request) const {
  std::string hash = chat_request_hash(request);
  for (const auto& e : entries_) {
    if (e.request_hash == hash) return &e.reply;
  }
  return nullptr;
}

FixtureChatClient::FixtureChatClient(Mode mode, Cassette cassette,
                                     std::unique_ptr<ChatClient> inner)
    : mode_(mode), cassette_(std::move(cassette)), inner_(std::move(inner)) {
  if (mode_ == Mode::kRecord && !inner_) {
    throw ConfigError("record mode requires a live client to record from");
  }
}

std::string FixtureChatClient::complete(const ChatRequest& request) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (const std::string* reply = cassette_.find(request)) return *reply;
  }
  if (mode_ == Mode::kReplay) {
    throw ClientError(0, "no recorded reply for request " + chat_request_hash(request) +
                             " (replay mode makes no network calls)");
  }
  std::string reply = inner_->complete(request);
  std::lock_guard<std::mutex> lock(mutex_);
  cassette_.add(request, reply);
  return reply;
}

}  // namespace mei
