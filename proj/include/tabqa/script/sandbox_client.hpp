#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabqa/answer.hpp"

namespace tabqa::script {

struct SandboxRequest {
  std::string id;
  std::string code;  // single line
  std::filesystem::path table_csv_path;
  std::int64_t timeout_ms = 30000;
};

enum class SandboxStatus { Ok, Error, Timeout };
std::string_view to_string(SandboxStatus s) noexcept;

struct SandboxResponse {
  std::string id;
  SandboxStatus status = SandboxStatus::Error;
  std::optional<TypedAnswer> result;      // iff Ok
  std::optional<std::string> error_text;  // iff Error
  std::int64_t duration_ms = 0;
};

/// One-line wire forms. Parsing throws Error(SandboxProtocol) on any schema
/// violation, including a result/error_text that does not match the status.
std::string request_to_json(const SandboxRequest& req);
SandboxRequest request_from_json(std::string_view line);
std::string response_to_json(const SandboxResponse& resp);
SandboxResponse response_from_json(std::string_view line);

/// Spawns the runner executable once per request, in its own process group,
/// writes the request to its stdin and reads one response line from stdout.
/// The client enforces the wall-clock limit itself: at timeout_ms plus a
/// grace period the whole process group is killed and a Timeout response is
/// synthesized. Safe to call from several threads; every call uses its own
/// process.
class SandboxClient {
 public:
  explicit SandboxClient(std::vector<std::string> command,
                         std::chrono::milliseconds grace = std::chrono::milliseconds(500));

  /// Throws Error(SandboxProtocol) when the runner cannot be started, exits
  /// non-zero, or writes something that is not a response for `req`.
  SandboxResponse run(const SandboxRequest& req) const;

  const std::vector<std::string>& command() const noexcept { return command_; }

 private:
  std::vector<std::string> command_;
  std::chrono::milliseconds grace_;
};

}  // namespace tabqa::script
