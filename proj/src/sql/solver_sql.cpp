#include "tabqa/sql/solver_sql.hpp"

#include <cctype>

#include "tabqa/error.hpp"
#include "tabqa/llm/extract.hpp"
#include "tabqa/llm/templates.hpp"
#include "tabqa/table/render.hpp"

namespace tabqa::sql {

namespace {

std::vector<std::size_t> all_indices(const table::TableHandle& t) {
  std::vector<std::size_t> out(t.column_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

struct Outcome {
  std::string code;
  std::optional<TypedAnswer> answer;
  CandidateStatus status = CandidateStatus::Ok;
  std::string error_text;
};

// Models sometimes write ```sql SELECT ...``` on one line.
std::string drop_inline_language_tag(std::string code) {
  if (code.size() > 4 && llm::to_lower_ascii(code.substr(0, 3)) == "sql" &&
      std::isspace(static_cast<unsigned char>(code[3]))) {
    return llm::trim(code.substr(4));
  }
  return code;
}

Outcome run_completion(const std::string& completion, bool bare_line_fallback,
                       const table::TableHandle& t, const SqlSolveOptions& options) {
  Outcome out;
  try {
    out.code = drop_inline_language_tag(llm::extract_code_block(completion));
  } catch (const Error& e) {
    if (!bare_line_fallback || llm::trim(completion).empty()) {
      out.status = CandidateStatus::ExtractionFailed;
      out.error_text = e.what();
      return out;
    }
    out.code = llm::trim(completion);
  }
  try {
    SqlAttempt attempt = execute_sql(out.code, t, options.statement_timeout);
    if (attempt.status != CandidateStatus::Ok) {
      out.status = attempt.status;
      out.error_text = attempt.error_text;
      return out;
    }
    out.answer = format_sql_result(attempt, options.type_hint);
  } catch (const Error& e) {
    out.status = CandidateStatus::ExecError;
    out.error_text = e.what();
  }
  return out;
}

CandidateSolution to_candidate(Strategy s, Outcome o, bool corrected) {
  if (o.status == CandidateStatus::Ok) return CandidateSolution::ok(s, std::move(o.code), std::move(*o.answer), corrected);
  return CandidateSolution::failed(s, std::move(o.code), o.status, std::move(o.error_text), corrected);
}

}  // namespace

std::string build_sql_prompt(const Question& q, const table::TableHandle& t,
                             const table::ColumnSelection& sel,
                             const std::vector<retrieval::RowMatch>& matches,
                             const std::map<std::string, std::string>* explanations) {
  auto cols = table::column_indices(t, sel.selected);
  std::string columns;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto& col = t.columns()[cols[i]];
    if (i) columns += ", ";
    columns += table::column_listing(t, {cols[i]}, "");
    if (explanations) {
      auto it = explanations->find(col.name);
      if (it != explanations->end() && it->second != col.name) columns += " [" + it->second + "]";
    }
  }
  std::vector<std::size_t> rows;
  for (const auto& m : matches) rows.push_back(m.row_index);
  return llm::render_template(llm::prompt::kSqlGeneration,
                              {{"question", q.text},
                               {"columns", columns},
                               {"rows", "\n" + table::markdown_table(t, cols, rows)}});
}

std::string build_sql_correction_prompt(const Question& q, const table::TableHandle& t,
                                        const std::vector<std::string>& errors) {
  std::string tracebacks;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i) tracebacks += "\n";
    tracebacks += "Solution " + std::to_string(i + 1) + " Error:\n" + errors[i] + "\n";
  }
  auto cols = all_indices(t);
  std::string first_row = t.row_count() ? table::python_row_dict(t, cols, 0) : "{}";
  return llm::render_template(llm::prompt::kSelfCorrectionSql,
                              {{"question", q.text},
                               {"tracebacks", tracebacks},
                               {"columns", table::python_dtype_pairs(t, cols)},
                               {"first_row", first_row}});
}

CandidateSolution solve_sql(const Question& q, const table::TableHandle& t,
                            const table::ColumnSelection& sel,
                            const std::vector<retrieval::RowMatch>& matches,
                            const llm::ModelRole& role, const SqlSolveOptions& options,
                            Transcript* transcript) {
  const std::string tag(to_string(options.strategy));
  std::string completion;
  try {
    completion = llm::ask(role, tag, build_sql_prompt(q, t, sel, matches, options.explanations), transcript);
  } catch (const std::exception& e) {
    return CandidateSolution::failed(options.strategy, "", CandidateStatus::ExecError, e.what(), false);
  }
  Outcome first = run_completion(completion, false, t, options);
  if (first.status == CandidateStatus::Ok) return to_candidate(options.strategy, std::move(first), false);

  std::string error = first.code.empty() ? first.error_text : first.code + "\n" + first.error_text;
  try {
    completion = llm::ask(role, tag + ".correction", build_sql_correction_prompt(q, t, {error}), transcript);
  } catch (const std::exception& e) {
    first.error_text += "\ncorrection request failed: " + std::string(e.what());
    return to_candidate(options.strategy, std::move(first), true);
  }
  return to_candidate(options.strategy, run_completion(completion, true, t, options), true);
}

}  // namespace tabqa::sql
