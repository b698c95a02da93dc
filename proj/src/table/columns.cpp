#include "tabqa/table/columns.hpp"

#include <algorithm>
#include <set>

#include "tabqa/error.hpp"
#include "tabqa/llm/extract.hpp"
#include "tabqa/llm/templates.hpp"
#include "tabqa/table/render.hpp"

namespace tabqa::table {

namespace {

std::string strip_decorations(std::string token) {
  token = llm::trim(token);
  const std::string junk = "\"'`[]()*-";
  while (!token.empty() && junk.find(token.front()) != std::string::npos) {
    token.erase(0, 1);
    token = llm::trim(token);
  }
  while (!token.empty() && (junk.find(token.back()) != std::string::npos || token.back() == '.')) {
    token.pop_back();
    token = llm::trim(token);
  }
  return token;
}

std::optional<std::size_t> resolve(const std::string& token, const TableHandle& t) {
  const auto& cols = t.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].name == token || cols[i].original == token) return i;
  }
  std::string lowered = llm::to_lower_ascii(token);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (llm::to_lower_ascii(cols[i].name) == lowered ||
        llm::to_lower_ascii(cols[i].original) == lowered) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> all_indices(const TableHandle& t) {
  std::vector<std::size_t> out(t.column_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

}  // namespace

ColumnSelection all_columns(const Question& q, const TableHandle& t, std::string rationale) {
  return {q.id, t.column_names(), std::move(rationale)};
}

std::vector<std::string> parse_column_list(const std::string& completion, const TableHandle& t) {
  std::string body;
  try {
    body = llm::extract_marked_section(completion, "COLUMNS:");
  } catch (const Error&) {
    body = completion;
  }
  std::set<std::size_t> picked;
  std::string token;
  auto flush = [&] {
    std::string cleaned = strip_decorations(token);
    if (!cleaned.empty()) {
      if (auto i = resolve(cleaned, t)) picked.insert(*i);
    }
    token.clear();
  };
  for (char c : body) {
    if (c == ',' || c == '\n') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  std::vector<std::string> out;
  for (std::size_t i : picked) out.push_back(t.columns()[i].name);
  return out;
}

ColumnSelection select_columns(const Question& q, const TableHandle& t, const llm::ModelRole& role,
                               Transcript* transcript) {
  if (t.column_count() == 1) return all_columns(q, t, "single-column table");

  auto cols = all_indices(t);
  std::string prompt = llm::render_template(
      llm::prompt::kColumnSelection,
      {{"question", q.text},
       {"columns", column_listing(t, cols, "\n")},
       {"rows", markdown_table(t, cols, first_rows(t, 3))}});
  std::string completion = llm::ask(role, "columns", std::move(prompt), transcript);

  ColumnSelection selection;
  selection.question_id = q.id;
  selection.selected = parse_column_list(completion, t);
  auto marker = llm::find_marker_end_tiered(completion, "COLUMNS:", 1);
  std::string before = marker ? completion.substr(0, *marker) : completion;
  if (marker) {
    std::size_t cut = llm::to_lower_ascii(before).rfind("col");
    before.resize(cut == std::string::npos ? before.size() - std::min<std::size_t>(before.size(), 8) : cut);
  }
  selection.rationale = llm::trim(before);
  if (selection.selected.empty()) {
    return all_columns(q, t, "selector named no known column; using all columns");
  }
  return selection;
}

std::map<std::string, std::string> explain_columns(const TableHandle& t, const llm::ModelRole& role,
                                                   Transcript* transcript) {
  auto cols = all_indices(t);
  std::vector<std::string> names;
  for (std::size_t c : cols) names.push_back(t.columns()[c].name);
  std::string prompt = llm::render_template(
      llm::prompt::kColumnExplanation,
      {{"dataset", t.dataset_id()},
       {"columns", python_list(names)},
       {"rows", markdown_table(t, cols, first_rows(t, 3))}});
  std::string completion = llm::ask(role, "explain", std::move(prompt), transcript);

  std::map<std::string, std::string> out;
  for (const auto& c : t.columns()) out[c.name] = c.name;

  std::string body;
  try {
    body = llm::extract_marked_section(completion, "NAMES:");
  } catch (const Error&) {
    body = completion;
  }
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find('\n', start);
    if (end == std::string::npos) end = body.size();
    std::string line = body.substr(start, end - start);
    start = end + 1;
    std::size_t sep = line.find("->");
    std::size_t sep_len = 2;
    if (sep == std::string::npos) {
      sep = line.find(':');
      sep_len = 1;
    }
    if (sep == std::string::npos) continue;
    auto idx = resolve(strip_decorations(line.substr(0, sep)), t);
    std::string readable = strip_decorations(line.substr(sep + sep_len));
    if (idx && !readable.empty()) out[t.columns()[*idx].name] = readable;
  }
  return out;
}

}  // namespace tabqa::table
