#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tabqa::llm {

struct Message {
  std::string role;  // system | user | assistant
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_tokens = 2048;
  std::optional<std::int64_t> seed;

  /// Throws Error(Config) if messages are empty, temperature is negative or
  /// max_tokens is not positive.
  void validate() const;
};

ChatRequest user_request(std::string model, std::string prompt);

struct ChatResponse {
  std::string content;
  std::string finish_reason = "stop";
  std::uint64_t latency_ms = 0;
};

/// Hex SHA-256 over the model name and the full message list. Sampling
/// parameters are deliberately left out so one cassette serves several
/// temperature or seed settings.
std::string fingerprint(const ChatRequest& request);

/// Chat-completion backend. Implementations must allow concurrent calls.
class Gateway {
 public:
  virtual ~Gateway() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

struct Endpoint {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string api_key;   // empty: no Authorization header
  std::chrono::milliseconds timeout{120000};
  RetryPolicy retry;
};

/// OpenAI-compatible `POST {base}/v1/chat/completions`.
/// Connection failures and 5xx responses are retried with exponential
/// backoff; after the budget is spent they surface as EndpointUnreachable
/// (or RateLimited when the last failure was HTTP 429).
class HttpGateway final : public Gateway {
 public:
  explicit HttpGateway(Endpoint endpoint);
  ChatResponse complete(const ChatRequest& request) override;

 private:
  Endpoint endpoint_;
};

/// Serves responses from a JSON-lines cassette of `{fingerprint, response}`
/// records. The lookup table is immutable after construction; repeated
/// fingerprints (allowed only when not strict) are served in recorded order
/// and the last one repeats once exhausted.
class ReplayGateway final : public Gateway {
 public:
  static ReplayGateway load(const std::filesystem::path& path, bool strict = false);
  ChatResponse complete(const ChatRequest& request) override;

  std::size_t size() const noexcept { return entry_count_; }

  ReplayGateway(ReplayGateway&&) noexcept;
  ~ReplayGateway() override;

 private:
  struct Slot;
  ReplayGateway() = default;
  std::unordered_map<std::string, std::unique_ptr<Slot>> slots_;
  std::size_t entry_count_ = 0;
};

/// Passes calls through to `inner` and keeps every exchange. `save` writes
/// the cassette sorted by fingerprint (stable within a fingerprint) so the
/// file does not depend on thread interleaving.
class RecordingGateway final : public Gateway {
 public:
  RecordingGateway(std::shared_ptr<Gateway> inner, std::filesystem::path path);
  ChatResponse complete(const ChatRequest& request) override;
  void save() const;
  std::size_t size() const;

 private:
  struct Entry {
    std::string fingerprint;
    std::string model;
    ChatResponse response;
  };
  std::shared_ptr<Gateway> inner_;
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
};

/// Answers from a callable; used by tests and fixture authoring.
class ScriptedGateway final : public Gateway {
 public:
  using Script = std::function<std::string(const ChatRequest&)>;
  explicit ScriptedGateway(Script script) : script_(std::move(script)) {}
  ChatResponse complete(const ChatRequest& request) override;

 private:
  Script script_;
};

}  // namespace tabqa::llm
