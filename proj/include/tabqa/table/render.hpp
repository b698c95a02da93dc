#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tabqa/table/table.hpp"

namespace tabqa::table {

/// Column indices for a list of sanitized names; unknown names are skipped.
std::vector<std::size_t> column_indices(const TableHandle& t, const std::vector<std::string>& names);

/// GitHub pipe table. Header uses `use_original_names ? original : sanitized`
/// headers. `|` is escaped as `\|`, line breaks become `<br>`, nulls render
/// empty.
std::string markdown_table(const TableHandle& t, const std::vector<std::size_t>& columns,
                           const std::vector<std::size_t>& rows, bool use_original_names = false);

/// Fixed-width text grid with a leading row-index column, like a dataframe's
/// string form.
std::string text_grid(const TableHandle& t, const std::vector<std::size_t>& columns,
                      const std::vector<std::size_t>& rows);

/// `['a', 'b']`
std::string python_list(const std::vector<std::string>& items);

/// `{'age': 30, 'name': 'Ann'}` for one row; numbers and booleans unquoted.
std::string python_row_dict(const TableHandle& t, const std::vector<std::size_t>& columns,
                            std::size_t row);

/// `[('age', 'integer'), ('name', 'text')]`
std::string python_dtype_pairs(const TableHandle& t, const std::vector<std::size_t>& columns);

/// `"name: type"` lines, with the original header when it differs.
std::string column_listing(const TableHandle& t, const std::vector<std::size_t>& columns,
                           const std::string& separator);

std::vector<std::size_t> first_rows(const TableHandle& t, std::size_t n);

}  // namespace tabqa::table
