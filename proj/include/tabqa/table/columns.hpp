#pragma once

#include <map>
#include <string>
#include <vector>

#include "tabqa/llm/call.hpp"
#include "tabqa/model.hpp"
#include "tabqa/table/table.hpp"

namespace tabqa::table {

struct ColumnSelection {
  std::string question_id;
  std::vector<std::string> selected;  // sanitized names, table order, never empty
  std::string rationale;
};

/// Every column of `t`, in table order.
ColumnSelection all_columns(const Question& q, const TableHandle& t, std::string rationale);

/// Names picked out of a selector completion. Accepts sanitized or original
/// headers (exact first, then case-insensitive); anything else is dropped.
std::vector<std::string> parse_column_list(const std::string& completion, const TableHandle& t);

/// Asks the selector model for the columns relevant to `q`. Single-column
/// tables skip the call. Hallucinated names are dropped and an empty result
/// falls back to all columns.
ColumnSelection select_columns(const Question& q, const TableHandle& t, const llm::ModelRole& role,
                               Transcript* transcript = nullptr);

/// Optional pass proposing readable names (sanitized name -> explanation).
/// Columns the model does not mention map to themselves. The result is meant
/// for prompt text only.
std::map<std::string, std::string> explain_columns(const TableHandle& t, const llm::ModelRole& role,
                                                   Transcript* transcript = nullptr);

}  // namespace tabqa::table
