#include "tabqa/table/render.hpp"

#include <algorithm>

namespace tabqa::table {

namespace {

std::string escape_markdown(const std::string& cell) {
  std::string out;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    char c = cell[i];
    if (c == '|') {
      out += "\\|";
    } else if (c == '\r') {
      if (i + 1 < cell.size() && cell[i + 1] == '\n') ++i;
      out += "<br>";
    } else if (c == '\n') {
      out += "<br>";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string python_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out.push_back('\\');
    out.push_back(c);
  }
  return out + "'";
}

// UTF-8 aware display width approximation: counts code points.
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad_left(const std::string& s, std::size_t w) {
  std::size_t n = width(s);
  return n >= w ? s : std::string(w - n, ' ') + s;
}

}  // namespace

std::vector<std::size_t> column_indices(const TableHandle& t,
                                        const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    if (auto i = t.find(n)) out.push_back(*i);
  }
  return out;
}

std::vector<std::size_t> first_rows(const TableHandle& t, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(n, t.row_count()); ++i) out.push_back(i);
  return out;
}

std::string markdown_table(const TableHandle& t, const std::vector<std::size_t>& columns,
                           const std::vector<std::size_t>& rows, bool use_original_names) {
  std::string out = "|";
  for (std::size_t c : columns) {
    const Column& col = t.columns()[c];
    out += " " + escape_markdown(use_original_names ? col.original : col.name) + " |";
  }
  out += "\n|";
  for (std::size_t i = 0; i < columns.size(); ++i) out += " --- |";
  for (std::size_t r : rows) {
    out += "\n|";
    for (std::size_t c : columns) {
      const Cell& cell = t.rows()[r][c];
      out += " " + escape_markdown(cell.value_or("")) + " |";
    }
  }
  return out;
}

std::string text_grid(const TableHandle& t, const std::vector<std::size_t>& columns,
                      const std::vector<std::size_t>& rows) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{""};
  for (std::size_t c : columns) header.push_back(t.columns()[c].name);
  grid.push_back(header);
  for (std::size_t r : rows) {
    std::vector<std::string> line{std::to_string(r)};
    for (std::size_t c : columns) {
      std::string v = t.rows()[r][c].value_or("NaN");
      std::replace(v.begin(), v.end(), '\n', ' ');
      line.push_back(v);
    }
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], width(line[i]));
  }
  std::string out;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    if (l) out += "\n";
    for (std::size_t i = 0; i < grid[l].size(); ++i) {
      if (i) out += "  ";
      out += pad_left(grid[l][i], widths[i]);
    }
  }
  return out;
}

std::string python_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += python_quote(items[i]);
  }
  return out + "]";
}

std::string python_row_dict(const TableHandle& t, const std::vector<std::size_t>& columns,
                            std::size_t row) {
  std::string out = "{";
  bool first = true;
  for (std::size_t c : columns) {
    if (!first) out += ", ";
    first = false;
    const Column& col = t.columns()[c];
    out += python_quote(col.name) + ": ";
    const Cell& cell = t.rows()[row][c];
    if (!cell) {
      out += "nan";
    } else if (col.dtype == DType::Integer || col.dtype == DType::Decimal) {
      out += *cell;
    } else if (col.dtype == DType::Boolean) {
      out += (*cell == "True" || *cell == "true" || *cell == "TRUE") ? "True" : "False";
    } else {
      out += python_quote(*cell);
    }
  }
  return out + "}";
}

std::string python_dtype_pairs(const TableHandle& t, const std::vector<std::size_t>& columns) {
  std::string out = "[";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const Column& col = t.columns()[columns[i]];
    if (i) out += ", ";
    out += "(" + python_quote(col.name) + ", " + python_quote(std::string(to_string(col.dtype))) + ")";
  }
  return out + "]";
}

std::string column_listing(const TableHandle& t, const std::vector<std::size_t>& columns,
                           const std::string& separator) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const Column& col = t.columns()[columns[i]];
    if (i) out += separator;
    out += col.name + ": " + std::string(to_string(col.dtype));
    if (col.original != col.name) out += " (original header: " + col.original + ")";
  }
  return out;
}

}  // namespace tabqa::table
