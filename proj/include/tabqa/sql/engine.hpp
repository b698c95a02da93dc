#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tabqa/answer.hpp"
#include "tabqa/model.hpp"
#include "tabqa/table/table.hpp"

struct sqlite3;

namespace tabqa::sql {

inline constexpr const char* kTableName = "temp_table";
inline constexpr std::chrono::milliseconds kDefaultStatementTimeout{10000};

using SqlValue = std::variant<std::monostate, std::int64_t, double, std::string>;

struct ResultGrid {
  std::vector<std::string> columns;
  std::vector<std::vector<SqlValue>> rows;
};

struct SqlAttempt {
  std::string query;
  ResultGrid engine_result;
  CandidateStatus status = CandidateStatus::Ok;  // Ok, ExecError or Timeout
  std::string error_text;
};

/// Private in-memory SQLite database holding one table as `temp_table`,
/// with sanitized column names. Not shareable between threads.
class SqlEngine {
 public:
  explicit SqlEngine(const table::TableHandle& table);
  ~SqlEngine();
  SqlEngine(const SqlEngine&) = delete;
  SqlEngine& operator=(const SqlEngine&) = delete;
  SqlEngine(SqlEngine&&) noexcept;
  SqlEngine& operator=(SqlEngine&&) noexcept;

  /// Guards, then runs `query` under a wall-clock statement timeout. Engine
  /// failures are reported in the attempt (message verbatim); only guard
  /// violations throw (Error(ForbiddenSql)).
  SqlAttempt execute(std::string_view query,
                     std::chrono::milliseconds timeout = kDefaultStatementTimeout);

 private:
  sqlite3* db_ = nullptr;
};

/// Convenience: materialize `t` in a fresh engine and run `query`.
SqlAttempt execute_sql(std::string_view query, const table::TableHandle& t,
                       std::chrono::milliseconds timeout = kDefaultStatementTimeout);

/// Turns an Ok attempt into a typed answer. Single cell -> scalar (text
/// 'True'/'False' -> boolean), single column -> list, single row with a list
/// hint -> list over the row. Nulls inside lists are dropped. A scalar hint
/// over many rows takes the first row. Throws Error(UnformattableResult).
TypedAnswer format_sql_result(const SqlAttempt& attempt, std::optional<AnswerType> hint);

}  // namespace tabqa::sql
