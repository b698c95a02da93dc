#include "tabqa/table/table.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "tabqa/decimal.hpp"
#include "tabqa/error.hpp"
#include "tabqa/table/csv.hpp"

namespace tabqa::table {

std::string_view to_string(DType t) noexcept {
  switch (t) {
    case DType::Integer: return "integer";
    case DType::Decimal: return "decimal";
    case DType::Boolean: return "boolean";
    case DType::Text: return "text";
    case DType::Datetime: return "datetime";
  }
  return "text";
}

TableHandle::TableHandle(std::string dataset_id, std::vector<Column> columns,
                         std::vector<Row> rows, SanitizationMap map)
    : dataset_id_(std::move(dataset_id)),
      columns_(std::move(columns)),
      rows_(std::move(rows)),
      map_(std::move(map)) {}

std::optional<std::size_t> TableHandle::find(std::string_view sanitized_name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == sanitized_name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> TableHandle::column_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

bool is_boolean_literal(std::string_view s) {
  return s == "True" || s == "False" || s == "true" || s == "false" || s == "TRUE" ||
         s == "FALSE";
}

bool is_iso_datetime(std::string_view s) {
  static const std::regex pattern(
      R"(\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)");
  if (!std::regex_match(s.begin(), s.end(), pattern)) return false;
  int month = std::stoi(std::string(s.substr(5, 2)));
  int day = std::stoi(std::string(s.substr(8, 2)));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

namespace {

bool is_integer_literal(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

bool is_decimal_literal(std::string_view s) { return Decimal::try_parse(s).has_value(); }

}  // namespace

DType infer_dtype(const std::vector<const std::string*>& values) {
  if (values.empty()) return DType::Text;
  auto all = [&](auto pred) {
    for (const std::string* v : values) {
      if (!pred(*v)) return false;
    }
    return true;
  };
  if (all(is_boolean_literal)) return DType::Boolean;
  if (all(is_integer_literal)) return DType::Integer;
  if (all(is_decimal_literal)) return DType::Decimal;
  if (all(is_iso_datetime)) return DType::Datetime;
  return DType::Text;
}

TablePtr table_from_records(std::string dataset_id,
                            const std::vector<std::vector<Cell>>& records) {
  if (records.empty()) throw Error(ErrorKind::EmptyTable, "no header row");
  if (records.size() < 2) throw Error(ErrorKind::EmptyTable, "table has no data rows");
  std::vector<std::string> headers;
  for (const auto& h : records.front()) headers.push_back(h.value_or(""));

  std::vector<Row> rows(records.begin() + 1, records.end());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != headers.size()) {
      throw Error(ErrorKind::RaggedRows, "row " + std::to_string(r + 1) + " has " +
                                             std::to_string(rows[r].size()) + " fields, header has " +
                                             std::to_string(headers.size()));
    }
  }

  SanitizedHeaders sanitized = sanitize_columns(headers);
  std::vector<Column> columns;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    std::vector<const std::string*> values;
    for (const auto& row : rows) {
      if (row[c]) values.push_back(&*row[c]);
    }
    columns.push_back({sanitized.names[c], headers[c], infer_dtype(values)});
  }
  return std::make_shared<const TableHandle>(std::move(dataset_id), std::move(columns),
                                             std::move(rows), std::move(sanitized.map));
}

TablePtr load_table(const std::filesystem::path& path, std::string dataset_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) {
    throw Error(ErrorKind::UnreadableFile, "cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (dataset_id.empty()) dataset_id = path.stem().string();
  return table_from_records(std::move(dataset_id), parse_csv(buf.str()));
}

void write_csv(const TableHandle& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    out << (c ? "," : "") << csv_escape(table.columns()[c].name);
  }
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << (row[c] ? csv_escape(*row[c]) : "");
    }
    out << '\n';
  }
}

}  // namespace tabqa::table
