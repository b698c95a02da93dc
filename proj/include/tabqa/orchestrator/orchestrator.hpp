#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/llm/call.hpp"
#include "tabqa/model.hpp"
#include "tabqa/table/table.hpp"

namespace tabqa::orchestrator {

inline constexpr std::size_t kPreviewLength = 50;  // code points

struct OrchestratorVerdict {
  std::size_t chosen_index = 0;  // into the full candidate list; always an Ok candidate
  std::optional<AnswerType> predicted_type;
  std::string reasoning;
  DecisionCategory category = DecisionCategory::ConflictResolution;
};

/// Keyword guess used when the model's type answer cannot be read.
AnswerType heuristic_answer_type(std::string_view question);

/// Type named after "ANSWER:" in a completion, if any.
std::optional<AnswerType> parse_answer_type(std::string_view completion);

/// Asks the model for the expected answer type. Total: parse failures and
/// gateway errors fall back to the keyword heuristic.
AnswerType deduce_answer_type(const Question& q, const llm::ModelRole& role,
                              Transcript* transcript = nullptr);

/// First `n` code points of `s`.
std::string utf8_prefix(std::string_view s, std::size_t n);

/// The selector prompt over the Ok candidates only, numbered from 1.
std::string build_selection_prompt(const Question& q, const std::vector<CandidateSolution>& candidates,
                                   const table::TableHandle& t);

/// 1-based solution number after the last fuzzy "ANSWER:". Throws
/// Error(SelectionUnparseable).
std::size_t parse_selection(std::string_view completion);

bool all_ok_agree(const std::vector<CandidateSolution>& candidates);

DecisionCategory classify_decision(const std::vector<CandidateSolution>& candidates,
                                   const OrchestratorVerdict& verdict);

/// Picks one Ok candidate. Unanimous candidates are settled without a model
/// call. Otherwise the answer type is deduced and the selector model chooses;
/// invalid or unreadable choices fall back to the lowest Ok candidate.
/// Throws std::invalid_argument when no candidate is Ok; gateway errors
/// from the selection call propagate.
OrchestratorVerdict select(const Question& q, const std::vector<CandidateSolution>& candidates,
                           const table::TableHandle& t, const llm::ModelRole& role,
                           Transcript* transcript = nullptr);

}  // namespace tabqa::orchestrator
