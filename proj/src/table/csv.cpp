#include "tabqa/table/csv.hpp"

namespace tabqa::table {

std::vector<CsvRow> parse_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<CsvRow> records;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes a blank line from one empty field

  auto end_field = [&] {
    if (field.empty()) {
      row.emplace_back(std::nullopt);
    } else {
      row.emplace_back(std::move(field));
    }
    field.clear();
  };
  auto end_record = [&] {
    if (field_started || !row.empty()) {
      end_field();
      records.push_back(std::move(row));
    }
    row.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  end_record();
  return records;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace tabqa::table
