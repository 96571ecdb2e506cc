#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mei/prompts.hpp"

namespace mei {

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 4096;
};

/// Stable content hash of a request, used to key fixture cassettes.
std::string chat_request_hash(const ChatRequest& request);

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct HttpChatOptions {
  std::string endpoint;  // e.g. "https://api.openai.com" or "http://host:8000"
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key;   // read from the environment by the CLI
  int max_retries = 3;
  int timeout_seconds = 120;
};

/// OpenAI-style chat-completion client. Retries transport errors, 429 and
/// 5xx with exponential backoff; a "length" finish reason raises
/// BudgetExceeded. Safe for concurrent use.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatOptions options);
  std::string complete(const ChatRequest& request) override;

 private:
  HttpChatOptions options_;
};

/// Wraps a callable, for tests.
class FunctionChatClient : public ChatClient {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FunctionChatClient(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const ChatRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
};

/// Cassette of request/reply pairs as jsonlines
/// {"request_hash", "messages": [{"role", "content"}...], "reply"}.
class Cassette {
 public:
  static Cassette load(const std::string& path);
  void save(const std::string& path) const;

  void add(const ChatRequest& request, const std::string& reply);
  /// Reply recorded for this request, or nullptr.
  const std::string* find(const ChatRequest& request) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::string request_hash;
    std::vector<ChatMessage> messages;
    std::string reply;
  };
  std::vector<Entry> entries_;
};

/// Replay: answers from the cassette only; a miss throws ClientError and
/// never touches the network. Record: delegates misses to the inner client
/// and appends the exchanges to the cassette.
class FixtureChatClient : public ChatClient {
 public:
  enum class Mode { kReplay, kRecord };

  FixtureChatClient(Mode mode, Cassette cassette, std::unique_ptr<ChatClient> inner = nullptr);
  std::string complete(const ChatRequest& request) override;

  const Cassette& cassette() const { return cassette_; }

 private:
  Mode mode_;
  Cassette cassette_;
  std::unique_ptr<ChatClient> inner_;
  std::mutex mutex_;
};

}  // namespace mei
