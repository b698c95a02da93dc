#include "tabqa/e2e/solver_e2e.hpp"

#include <regex>

#include "tabqa/error.hpp"
#include "tabqa/llm/extract.hpp"
#include "tabqa/llm/templates.hpp"
#include "tabqa/table/render.hpp"

namespace tabqa::e2e {

namespace {

bool is_quote(char c) { return c == '\'' || c == '"'; }

std::string strip_outer_quotes(std::string s) {
  if (s.size() >= 2 && is_quote(s.front()) && s.back() == s.front()) return s.substr(1, s.size() - 2);
  return s;
}

// Markdown emphasis around the whole answer, balanced or not.
std::string strip_emphasis(std::string_view s) {
  std::size_t b = s.find_first_not_of("* \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of("* \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<Decimal> plain_number(const std::string& s) {
  static const std::regex grouped(R"(^[+-]?\d{1,3}(,\d{3})+(\.\d+)?$)");
  std::string digits = s;
  if (std::regex_match(s, grouped)) std::erase(digits, ',');
  return Decimal::try_parse(digits, false);
}

struct Element {
  std::string text;
  bool quoted = false;
};

// Splits the inside of a bracketed list on commas outside quotes.
std::optional<std::vector<Element>> split_list(std::string_view body) {
  std::vector<Element> out;
  if (llm::trim(body).empty()) return out;
  std::string current;
  char quote = 0;
  bool quoted = false;
  auto flush = [&]() {
    std::string text = llm::trim(current);
    if (quoted) text = strip_outer_quotes(text);
    out.push_back({text, quoted});
    current.clear();
    quoted = false;
  };
  for (char c : body) {
    if (quote) {
      current.push_back(c);
      if (c == quote) quote = 0;
    } else if (is_quote(c) && llm::trim(current).empty()) {
      quote = c;
      quoted = true;
      current.push_back(c);
    } else if (c == ',') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  if (quote) return std::nullopt;
  flush();
  return out;
}

}  // namespace

std::string render_markdown(const table::TableHandle& t, const table::ColumnSelection& sel,
                            std::size_t row_limit, const std::vector<retrieval::RowMatch>& matches) {
  std::vector<std::size_t> rows;
  std::vector<bool> used(t.row_count(), false);
  for (const auto& m : matches) {
    if (rows.size() >= row_limit) break;
    if (m.row_index < used.size() && !used[m.row_index]) {
      used[m.row_index] = true;
      rows.push_back(m.row_index);
    }
  }
  for (std::size_t r = 0; r < t.row_count() && rows.size() < row_limit; ++r) {
    if (!used[r]) rows.push_back(r);
  }
  return table::markdown_table(t, table::column_indices(t, sel.selected), rows, true);
}

TypedAnswer parse_freeform_answer(std::string_view raw) {
  std::string s = strip_emphasis(raw);
  std::string lowered = llm::to_lower_ascii(s);
  if (lowered == "true") return TypedAnswer::boolean(true);
  if (lowered == "false") return TypedAnswer::boolean(false);

  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
    if (auto elements = split_list(std::string_view(s).substr(1, s.size() - 2))) {
      std::vector<Decimal> numbers;
      bool numeric = !elements->empty();
      for (const auto& e : *elements) {
        auto d = e.quoted ? std::nullopt : plain_number(e.text);
        if (!d) {
          numeric = false;
          break;
        }
        numbers.push_back(*d);
      }
      if (numeric) return TypedAnswer::list_number(std::move(numbers));
      std::vector<std::string> items;
      for (auto& e : *elements) items.push_back(std::move(e.text));
      return TypedAnswer::list_category(std::move(items));
    }
  }
  if (auto d = plain_number(s)) return TypedAnswer::number(*d);
  return TypedAnswer::category(strip_outer_quotes(s));
}

CandidateSolution solve_e2e(const Question& q, const table::TableHandle& t,
                            const table::ColumnSelection& sel,
                            const std::vector<retrieval::RowMatch>& matches, const llm::ModelRole& role,
                            std::size_t row_limit, Transcript* transcript) {
  const Strategy s = Strategy::EndToEnd;
  std::string prompt = llm::render_template(
      llm::prompt::kEndToEnd, {{"question", q.text}, {"dataset", "\n" + render_markdown(t, sel, row_limit, matches)}});
  std::string completion;
  try {
    completion = llm::ask(role, to_string(s), std::move(prompt), transcript);
  } catch (const std::exception& e) {
    return CandidateSolution::failed(s, "", CandidateStatus::ExecError, e.what(), false);
  }
  std::string section;
  try {
    section = llm::extract_marked_section(completion, "Final Answer:");
  } catch (const Error& e) {
    return CandidateSolution::failed(s, "", CandidateStatus::ExtractionFailed, e.what(), false);
  }
  // The answer is the first non-empty line; anything after it is commentary.
  std::string answer;
  std::size_t pos = 0;
  while (pos <= section.size() && answer.empty()) {
    std::size_t end = section.find('\n', pos);
    if (end == std::string::npos) end = section.size();
    answer = strip_emphasis(std::string_view(section).substr(pos, end - pos));
    pos = end + 1;
  }
  if (answer.empty()) {
    return CandidateSolution::failed(s, "", CandidateStatus::ExtractionFailed, "empty final answer", false);
  }
  return CandidateSolution::ok(s, "", parse_freeform_answer(answer), false);
}

}  // namespace tabqa::e2e
