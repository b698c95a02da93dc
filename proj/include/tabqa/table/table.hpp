#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/table/sanitize.hpp"

namespace tabqa::table {

enum class DType { Integer, Decimal, Boolean, Text, Datetime };
std::string_view to_string(DType t) noexcept;

struct Column {
  std::string name;      // sanitized; used for every execution identifier
  std::string original;  // header as found in the file
  DType dtype = DType::Text;
};

using Cell = std::optional<std::string>;  // raw text, nullopt for null
using Row = std::vector<Cell>;

/// A loaded table. Immutable after construction and shared by pointer.
class TableHandle {
 public:
  TableHandle(std::string dataset_id, std::vector<Column> columns, std::vector<Row> rows,
              SanitizationMap map);

  const std::string& dataset_id() const noexcept { return dataset_id_; }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t column_count() const noexcept { return columns_.size(); }
  const SanitizationMap& sanitization_map() const noexcept { return map_; }

  /// Index of a column by sanitized name.
  std::optional<std::size_t> find(std::string_view sanitized_name) const;
  std::vector<std::string> column_names() const;

 private:
  std::string dataset_id_;
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  SanitizationMap map_;
};

using TablePtr = std::shared_ptr<const TableHandle>;

/// Boolean, then integer, then decimal, then ISO-8601 datetime, then text,
/// judged over every non-null cell. All-null columns are text.
DType infer_dtype(const std::vector<const std::string*>& values);
bool is_iso_datetime(std::string_view s);
bool is_boolean_literal(std::string_view s);

/// Builds a table from parsed CSV records (first record is the header).
/// Throws EmptyTable or RaggedRows.
TablePtr table_from_records(std::string dataset_id, const std::vector<std::vector<Cell>>& records);

/// Reads a CSV file. `dataset_id` defaults to the file stem.
/// Throws UnreadableFile, EmptyTable or RaggedRows.
TablePtr load_table(const std::filesystem::path& path, std::string dataset_id = {});

/// Writes the table as CSV with sanitized headers.
void write_csv(const TableHandle& table, const std::filesystem::path& path);

}  // namespace tabqa::table
