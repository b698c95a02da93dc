#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tabqa {

enum class ErrorKind {
  MalformedAnswer,
  NonFinite,
  // llm gateway
  EndpointUnreachable,
  RateLimited,
  CassetteMiss,
  UnboundPlaceholder,
  UnknownTemplate,
  MarkerNotFound,
  NoCodeFound,
  // tables
  UnreadableFile,
  EmptyTable,
  RaggedRows,
  // retrieval
  DimMismatch,
  // solvers
  ForbiddenSql,
  SqlExecError,
  SqlTimeout,
  UnformattableResult,
  NotSingleLine,
  NoResultAssignment,
  SandboxProtocol,
  // orchestrator
  SelectionUnparseable,
  // configuration / io
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers can branch
/// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace tabqa
