#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabqa::table {

/// Null cells are nullopt; an empty field (quoted or not) is null.
using CsvRow = std::vector<std::optional<std::string>>;

/// RFC-4180 reader: quoted fields, doubled quotes, embedded line breaks,
/// CRLF or LF records and a leading UTF-8 BOM. Blank lines are skipped.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field only when it contains a delimiter, quote or line break.
std::string csv_escape(std::string_view field);

}  // namespace tabqa::table
