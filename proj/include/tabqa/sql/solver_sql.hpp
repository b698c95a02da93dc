#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabqa/llm/call.hpp"
#include "tabqa/model.hpp"
#include "tabqa/retrieval/retrieval.hpp"
#include "tabqa/sql/engine.hpp"
#include "tabqa/table/columns.hpp"

namespace tabqa::sql {

/// Renders the SQL generation template: selected columns with types and the
/// retrieved rows as a markdown table (header only when `matches` is empty).
std::string build_sql_prompt(const Question& q, const table::TableHandle& t,
                             const table::ColumnSelection& sel,
                             const std::vector<retrieval::RowMatch>& matches,
                             const std::map<std::string, std::string>* explanations = nullptr);

/// Self-correction prompt carrying the error texts, the full column/type
/// listing and the first row.
std::string build_sql_correction_prompt(const Question& q, const table::TableHandle& t,
                                        const std::vector<std::string>& errors);

struct SqlSolveOptions {
  Strategy strategy = Strategy::SqlA;
  std::chrono::milliseconds statement_timeout = kDefaultStatementTimeout;
  std::optional<AnswerType> type_hint;
  const std::map<std::string, std::string>* explanations = nullptr;
};

/// prompt -> completion -> extract -> guard -> execute -> format, with exactly
/// one self-correction round on any failure. Never throws; failures come
/// back as a non-Ok candidate. At most two completions are requested.
CandidateSolution solve_sql(const Question& q, const table::TableHandle& t,
                            const table::ColumnSelection& sel,
                            const std::vector<retrieval::RowMatch>& matches,
                            const llm::ModelRole& role, const SqlSolveOptions& options = {},
                            Transcript* transcript = nullptr);

}  // namespace tabqa::sql
