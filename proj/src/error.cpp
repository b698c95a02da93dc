#include "tabqa/error.hpp"

namespace tabqa {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedAnswer: return "MalformedAnswer";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::EndpointUnreachable: return "EndpointUnreachable";
    case ErrorKind::RateLimited: return "RateLimited";
    case ErrorKind::CassetteMiss: return "CassetteMiss";
    case ErrorKind::UnboundPlaceholder: return "UnboundPlaceholder";
    case ErrorKind::UnknownTemplate: return "UnknownTemplate";
    case ErrorKind::MarkerNotFound: return "MarkerNotFound";
    case ErrorKind::NoCodeFound: return "NoCodeFound";
    case ErrorKind::UnreadableFile: return "UnreadableFile";
    case ErrorKind::EmptyTable: return "EmptyTable";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::ForbiddenSql: return "ForbiddenSql";
    case ErrorKind::SqlExecError: return "SqlExecError";
    case ErrorKind::SqlTimeout: return "SqlTimeout";
    case ErrorKind::UnformattableResult: return "UnformattableResult";
    case ErrorKind::NotSingleLine: return "NotSingleLine";
    case ErrorKind::NoResultAssignment: return "NoResultAssignment";
    case ErrorKind::SandboxProtocol: return "SandboxProtocol";
    case ErrorKind::SelectionUnparseable: return "SelectionUnparseable";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace tabqa
