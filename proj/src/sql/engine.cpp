#include "tabqa/sql/engine.hpp"

#include <sqlite3.h>

#include <cctype>
#include <cmath>

#include "tabqa/decimal.hpp"
#include "tabqa/error.hpp"
#include "tabqa/sql/guard.hpp"

namespace tabqa::sql {

namespace {

using table::DType;

std::string quote_identifier(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

const char* column_affinity(DType t) {
  switch (t) {
    case DType::Integer:
    case DType::Boolean: return "INTEGER";
    case DType::Decimal: return "REAL";
    case DType::Text:
    case DType::Datetime: return "TEXT";
  }
  return "TEXT";
}

void check(int rc, sqlite3* db, const char* what) {
  if (rc != SQLITE_OK && rc != SQLITE_DONE && rc != SQLITE_ROW) {
    throw Error(ErrorKind::SqlExecError, std::string(what) + ": " + sqlite3_errmsg(db));
  }
}

struct Statement {
  sqlite3_stmt* stmt = nullptr;
  ~Statement() { sqlite3_finalize(stmt); }
};

void bind_cell(sqlite3_stmt* stmt, int index, DType dtype, const table::Cell& cell) {
  if (!cell) {
    sqlite3_bind_null(stmt, index);
    return;
  }
  const std::string& v = *cell;
  switch (dtype) {
    case DType::Boolean:
      sqlite3_bind_int(stmt, index, (v == "True" || v == "true" || v == "TRUE") ? 1 : 0);
      return;
    case DType::Integer:
      try {
        sqlite3_bind_int64(stmt, index, std::stoll(v));
        return;
      } catch (const std::exception&) {
        break;  // out of range: store as text
      }
    case DType::Decimal:
      if (auto d = Decimal::try_parse(v)) {
        sqlite3_bind_double(stmt, index, d->to_double());
        return;
      }
      break;
    default:
      break;
  }
  sqlite3_bind_text(stmt, index, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
}

struct Deadline {
  std::chrono::steady_clock::time_point at;
  bool expired = false;
};

int progress_callback(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  if (std::chrono::steady_clock::now() >= deadline->at) {
    deadline->expired = true;
    return 1;
  }
  return 0;
}

}  // namespace

SqlEngine::SqlEngine(const table::TableHandle& table) {
  if (sqlite3_open_v2(":memory:", &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw Error(ErrorKind::SqlExecError, "cannot open in-memory database: " + msg);
  }
  sqlite3_db_config(db_, SQLITE_DBCONFIG_DEFENSIVE, 1, nullptr);

  std::string ddl = std::string("CREATE TABLE ") + kTableName + " (";
  std::string placeholders;
  for (std::size_t i = 0; i < table.column_count(); ++i) {
    const auto& col = table.columns()[i];
    if (i) {
      ddl += ", ";
      placeholders += ", ";
    }
    ddl += quote_identifier(col.name) + " " + column_affinity(col.dtype);
    placeholders += "?";
  }
  ddl += ")";
  check(sqlite3_exec(db_, ddl.c_str(), nullptr, nullptr, nullptr), db_, "create table");
  check(sqlite3_exec(db_, "BEGIN", nullptr, nullptr, nullptr), db_, "begin");
  {
    Statement insert;
    std::string sql = std::string("INSERT INTO ") + kTableName + " VALUES (" + placeholders + ")";
    check(sqlite3_prepare_v2(db_, sql.c_str(), -1, &insert.stmt, nullptr), db_, "prepare insert");
    for (const auto& row : table.rows()) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        bind_cell(insert.stmt, static_cast<int>(c + 1), table.columns()[c].dtype, row[c]);
      }
      check(sqlite3_step(insert.stmt), db_, "insert row");
      sqlite3_reset(insert.stmt);
    }
  }
  check(sqlite3_exec(db_, "COMMIT", nullptr, nullptr, nullptr), db_, "commit");
}

SqlEngine::~SqlEngine() { sqlite3_close(db_); }

SqlEngine::SqlEngine(SqlEngine&& other) noexcept : db_(other.db_) { other.db_ = nullptr; }

SqlEngine& SqlEngine::operator=(SqlEngine&& other) noexcept {
  if (this != &other) {
    sqlite3_close(db_);
    db_ = other.db_;
    other.db_ = nullptr;
  }
  return *this;
}

SqlAttempt SqlEngine::execute(std::string_view query, std::chrono::milliseconds timeout) {
  SqlAttempt attempt;
  attempt.query = guard_sql(query);

  Statement stmt;
  const char* tail = nullptr;
  if (sqlite3_prepare_v2(db_, attempt.query.c_str(), static_cast<int>(attempt.query.size()),
                         &stmt.stmt, &tail) != SQLITE_OK) {
    attempt.status = CandidateStatus::ExecError;
    attempt.error_text = sqlite3_errmsg(db_);
    return attempt;
  }
  if (!stmt.stmt || !sqlite3_stmt_readonly(stmt.stmt)) {
    throw Error(ErrorKind::ForbiddenSql, "statement is not read-only");
  }
  if (tail && std::string_view(tail).find_first_not_of(" \t\r\n;") != std::string_view::npos) {
    throw Error(ErrorKind::ForbiddenSql, "multiple statements are not allowed");
  }

  Deadline deadline{std::chrono::steady_clock::now() + timeout};
  sqlite3_progress_handler(db_, 1000, progress_callback, &deadline);

  int ncols = sqlite3_column_count(stmt.stmt);
  for (int c = 0; c < ncols; ++c) {
    const char* name = sqlite3_column_name(stmt.stmt, c);
    attempt.engine_result.columns.emplace_back(name ? name : "");
  }
  int rc;
  while ((rc = sqlite3_step(stmt.stmt)) == SQLITE_ROW) {
    std::vector<SqlValue> row;
    row.reserve(ncols);
    for (int c = 0; c < ncols; ++c) {
      switch (sqlite3_column_type(stmt.stmt, c)) {
        case SQLITE_INTEGER: row.emplace_back(static_cast<std::int64_t>(sqlite3_column_int64(stmt.stmt, c))); break;
        case SQLITE_FLOAT: row.emplace_back(sqlite3_column_double(stmt.stmt, c)); break;
        case SQLITE_NULL: row.emplace_back(std::monostate{}); break;
        default: {
          auto* text = reinterpret_cast<const char*>(sqlite3_column_text(stmt.stmt, c));
          int n = sqlite3_column_bytes(stmt.stmt, c);
          row.emplace_back(std::string(text ? text : "", static_cast<std::size_t>(n)));
        }
      }
    }
    attempt.engine_result.rows.push_back(std::move(row));
  }
  sqlite3_progress_handler(db_, 0, nullptr, nullptr);
  if (rc != SQLITE_DONE) {
    attempt.engine_result = {};
    if (deadline.expired) {
      attempt.status = CandidateStatus::Timeout;
      attempt.error_text = "statement exceeded " + std::to_string(timeout.count()) + " ms";
    } else {
      attempt.status = CandidateStatus::ExecError;
      attempt.error_text = sqlite3_errmsg(db_);
    }
  }
  return attempt;
}

SqlAttempt execute_sql(std::string_view query, const table::TableHandle& t,
                       std::chrono::milliseconds timeout) {
  SqlEngine engine(t);
  return engine.execute(query, timeout);
}

// --- formatting -------------------------------------------------------------

namespace {

bool is_null(const SqlValue& v) { return std::holds_alternative<std::monostate>(v); }

std::optional<Decimal> as_decimal(const SqlValue& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return Decimal::from_int(*i);
  if (auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return std::nullopt;
    return Decimal::from_double(*d);
  }
  if (auto* s = std::get_if<std::string>(&v)) return Decimal::try_parse(*s, false);
  return std::nullopt;
}

bool is_numeric_cell(const SqlValue& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

std::string as_text(const SqlValue& v) {
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  if (auto d = as_decimal(v)) return d->to_string();
  return {};
}

std::optional<bool> as_boolean_text(const SqlValue& v) {
  auto* s = std::get_if<std::string>(&v);
  if (!s) return std::nullopt;
  std::string lowered;
  for (char c : *s) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lowered == "true") return true;
  if (lowered == "false") return false;
  return std::nullopt;
}

[[noreturn]] void unformattable(const std::string& why) {
  throw Error(ErrorKind::UnformattableResult, why);
}

TypedAnswer scalar(const SqlValue& v, std::optional<AnswerType> hint) {
  if (is_null(v)) unformattable("query returned NULL");
  if (hint == AnswerType::Boolean) {
    if (auto b = as_boolean_text(v)) return TypedAnswer::boolean(*b);
    if (auto* i = std::get_if<std::int64_t>(&v); i && (*i == 0 || *i == 1)) {
      return TypedAnswer::boolean(*i == 1);
    }
  }
  if (hint == AnswerType::Number) {
    if (auto d = as_decimal(v)) return TypedAnswer::number(*d);
  }
  if (hint == AnswerType::Category) return TypedAnswer::category(as_text(v));
  if (auto b = as_boolean_text(v)) return TypedAnswer::boolean(*b);
  if (is_numeric_cell(v)) {
    if (auto d = as_decimal(v)) return TypedAnswer::number(*d);
    unformattable("non-finite number");
  }
  return TypedAnswer::category(as_text(v));
}

TypedAnswer list(const std::vector<SqlValue>& cells, std::optional<AnswerType> hint) {
  std::vector<const SqlValue*> values;
  for (const auto& c : cells) {
    if (!is_null(c)) values.push_back(&c);
  }
  bool all_numeric = true;
  std::vector<Decimal> numbers;
  for (const SqlValue* v : values) {
    bool numeric = hint == AnswerType::ListNumber ? as_decimal(*v).has_value() : is_numeric_cell(*v);
    if (!numeric) {
      all_numeric = false;
      break;
    }
    numbers.push_back(*as_decimal(*v));
  }
  if (hint != AnswerType::ListCategory && all_numeric) return TypedAnswer::list_number(std::move(numbers));
  std::vector<std::string> texts;
  for (const SqlValue* v : values) texts.push_back(as_text(*v));
  return TypedAnswer::list_category(std::move(texts));
}

}  // namespace

TypedAnswer format_sql_result(const SqlAttempt& attempt, std::optional<AnswerType> hint) {
  if (attempt.status != CandidateStatus::Ok) unformattable("attempt did not succeed");
  const ResultGrid& grid = attempt.engine_result;
  const bool want_list = hint && is_list(*hint);
  const std::size_t ncols = grid.columns.size();
  if (grid.rows.empty()) {
    if (want_list) return *hint == AnswerType::ListNumber ? TypedAnswer::list_number({}) : TypedAnswer::list_category({});
    unformattable("query returned no rows");
  }
  if (ncols == 1) {
    std::vector<SqlValue> column;
    for (const auto& row : grid.rows) column.push_back(row.front());
    if (want_list) return list(column, hint);
    if (grid.rows.size() == 1 || hint) return scalar(column.front(), hint);
    return list(column, std::nullopt);
  }
  if (grid.rows.size() == 1 && want_list) return list(grid.rows.front(), hint);
  unformattable(std::to_string(grid.rows.size()) + "x" + std::to_string(ncols) +
                " result grid cannot be mapped to an answer");
}

}  // namespace tabqa::sql
