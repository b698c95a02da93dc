#include "tabqa/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "tabqa/error.hpp"
#include "tabqa/eval/evaluator.hpp"
#include "tabqa/llm/extract.hpp"
#include "tabqa/llm/templates.hpp"
#include "tabqa/table/render.hpp"

namespace tabqa::orchestrator {

namespace {

bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

bool starts_with_word(std::string_view text, std::string_view word) {
  return text.substr(0, word.size()) == word &&
         (text.size() == word.size() || !std::isalnum(static_cast<unsigned char>(text[word.size()])));
}

}  // namespace

AnswerType heuristic_answer_type(std::string_view question) {
  std::string q = llm::to_lower_ascii(llm::trim(question));
  for (std::string_view w : {"is", "are", "does", "do", "did", "was", "were", "has", "have", "can", "will",
                             "could", "should"}) {
    if (starts_with_word(q, w)) return AnswerType::Boolean;
  }
  if (starts_with_word(q, "list") || contains(q, "top ") || contains(q, "bottom ")) return AnswerType::ListCategory;
  for (std::string_view k : {"how many", "how much", "average", "mean ", "total", "sum ", "count", "number of"}) {
    if (contains(q, k)) return AnswerType::Number;
  }
  return AnswerType::Category;
}

std::optional<AnswerType> parse_answer_type(std::string_view completion) {
  std::string text;
  try {
    text = llm::to_lower_ascii(llm::extract_marked_section(completion, "ANSWER:"));
  } catch (const Error&) {
    return std::nullopt;
  }
  text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return c == '*' || c == '`' || c == ' '; }),
             text.end());
  text = text.substr(0, text.find('\n'));
  if (contains(text, "list")) {
    if (contains(text, "number") || contains(text, "integer") || contains(text, "float")) return AnswerType::ListNumber;
    return AnswerType::ListCategory;
  }
  if (contains(text, "bool")) return AnswerType::Boolean;
  for (std::string_view k : {"number", "integer", "float", "decimal", "numeric", "int"}) {
    if (contains(text, k)) return AnswerType::Number;
  }
  for (std::string_view k : {"category", "string", "text", "str"}) {
    if (contains(text, k)) return AnswerType::Category;
  }
  return std::nullopt;
}

AnswerType deduce_answer_type(const Question& q, const llm::ModelRole& role, Transcript* transcript) {
  try {
    std::string completion = llm::ask(role, "orchestrator.type",
                                      llm::render_template(llm::prompt::kAnswerType, {{"question", q.text}}), transcript);
    if (auto t = parse_answer_type(completion)) return *t;
  } catch (const std::exception&) {
  }
  return heuristic_answer_type(q.text);
}

std::string utf8_prefix(std::string_view s, std::size_t n) {
  std::size_t i = 0, count = 0;
  while (i < s.size() && count < n) {
    ++i;
    while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) ++i;
    ++count;
  }
  return std::string(s.substr(0, i));
}

std::string build_selection_prompt(const Question& q, const std::vector<CandidateSolution>& candidates,
                                   const table::TableHandle& t) {
  std::string solutions;
  std::size_t number = 0;
  for (const auto& c : candidates) {
    if (!c.is_ok()) continue;
    if (number) solutions += "   ";
    ++number;
    std::string code = c.strategy() == Strategy::EndToEnd ? "(end-to-end solution, no code)" : c.code();
    solutions += "Solution Number " + std::to_string(number) + ":  Code: " + code +
                 " Answer: " + utf8_prefix(display_text(*c.result()), kPreviewLength) + " (may be truncated) ";
  }
  return llm::render_template(llm::prompt::kOrchestrator, {{"question", q.text},
                                                           {"solutions", solutions},
                                                           {"columns", table::python_list(t.column_names())}});
}

std::size_t parse_selection(std::string_view completion) {
  std::string section;
  try {
    section = llm::extract_marked_section(completion, "ANSWER:");
  } catch (const Error& e) {
    throw Error(ErrorKind::SelectionUnparseable, e.what());
  }
  auto digit = section.find_first_of("0123456789");
  if (digit == std::string::npos || section.find('\n') < digit) {
    throw Error(ErrorKind::SelectionUnparseable, "no solution number after ANSWER:");
  }
  auto end = section.find_first_not_of("0123456789", digit);
  std::string digits = section.substr(digit, end == std::string::npos ? std::string::npos : end - digit);
  if (digits.size() > 9) throw Error(ErrorKind::SelectionUnparseable, "solution number out of range");
  return static_cast<std::size_t>(std::stoul(digits));
}

bool all_ok_agree(const std::vector<CandidateSolution>& candidates) {
  const TypedAnswer* first = nullptr;
  for (const auto& c : candidates) {
    if (!c.is_ok()) continue;
    if (!first) {
      first = &*c.result();
    } else if (!eval::answers_equal(*first, *c.result()) || !eval::answers_equal(*c.result(), *first)) {
      return false;
    }
  }
  return first != nullptr;
}

DecisionCategory classify_decision(const std::vector<CandidateSolution>& candidates,
                                   const OrchestratorVerdict& verdict) {
  if (all_ok_agree(candidates)) return DecisionCategory::Agreement;
  const AnswerType chosen = candidates.at(verdict.chosen_index).result()->type();
  if (verdict.predicted_type && chosen == *verdict.predicted_type) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (i != verdict.chosen_index && candidates[i].is_ok() && candidates[i].result()->type() != chosen) {
        return DecisionCategory::FormatMismatch;
      }
    }
  }
  bool same_types = std::all_of(candidates.begin(), candidates.end(), [&](const CandidateSolution& c) {
    return !c.is_ok() || c.result()->type() == chosen;
  });
  std::string reasoning = llm::to_lower_ascii(verdict.reasoning);
  bool cites_flaw = contains(reasoning, "flaw") || contains(reasoning, "incorrect logic") ||
                    contains(reasoning, "wrong aggregation");
  if (same_types && cites_flaw) return DecisionCategory::LogicalFiltering;
  return DecisionCategory::ConflictResolution;
}

OrchestratorVerdict select(const Question& q, const std::vector<CandidateSolution>& candidates,
                           const table::TableHandle& t, const llm::ModelRole& role, Transcript* transcript) {
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].is_ok()) ok.push_back(i);
  }
  if (ok.empty()) throw std::invalid_argument("select needs at least one Ok candidate");

  OrchestratorVerdict verdict;
  verdict.chosen_index = ok.front();
  if (all_ok_agree(candidates)) {
    verdict.category = DecisionCategory::Agreement;
    return verdict;
  }

  verdict.predicted_type = deduce_answer_type(q, role, transcript);
  std::string completion = llm::ask(role, "orchestrator.select", build_selection_prompt(q, candidates, t), transcript);
  try {
    verdict.reasoning = llm::extract_marked_section(completion, "REASONING:");
  } catch (const Error&) {
    verdict.reasoning = llm::trim(completion);
  }
  try {
    std::size_t number = parse_selection(completion);
    if (number >= 1 && number <= ok.size()) verdict.chosen_index = ok[number - 1];
  } catch (const Error&) {
    verdict.category = DecisionCategory::ConflictResolution;
    return verdict;
  }
  verdict.category = classify_decision(candidates, verdict);
  return verdict;
}

}  // namespace tabqa::orchestrator
