#pragma once

#include <string>
#include <string_view>

namespace tabqa::sql {

/// Accepts exactly one SELECT statement. Leading whitespace and comments are
/// allowed, as is a trailing semicolon. Anything else (DDL, DML, PRAGMA,
/// ATTACH, multiple statements, WITH clauses anywhere) throws
/// Error(ForbiddenSql) with the reason. Returns the statement with leading
/// comments, trailing semicolons and outer whitespace removed.
std::string guard_sql(std::string_view query);

}  // namespace tabqa::sql
