#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/llm/call.hpp"
#include "tabqa/model.hpp"
#include "tabqa/retrieval/retrieval.hpp"
#include "tabqa/table/columns.hpp"

namespace tabqa::e2e {

inline constexpr std::size_t kDefaultRowLimit = 20;

/// Pipe table over the selected columns (original headers) with at most
/// `row_limit` rows: ranked rows first, then the rest in table order.
std::string render_markdown(const table::TableHandle& t, const table::ColumnSelection& sel,
                            std::size_t row_limit,
                            const std::vector<retrieval::RowMatch>& matches = {});

/// Total parser for a free-form answer: boolean, then bracketed list, then
/// plain number (thousands separators allowed, no exponents), then category.
TypedAnswer parse_freeform_answer(std::string_view s);

/// One completion, no retries. Failures come back as ExtractionFailed (or
/// ExecError when the model call itself fails).
CandidateSolution solve_e2e(const Question& q, const table::TableHandle& t,
                            const table::ColumnSelection& sel,
                            const std::vector<retrieval::RowMatch>& matches, const llm::ModelRole& role,
                            std::size_t row_limit = kDefaultRowLimit, Transcript* transcript = nullptr);

}  // namespace tabqa::e2e
