#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tabqa/answer.hpp"

namespace tabqa {

struct Question {
  std::string id;
  std::string text;
  std::optional<AnswerType> expected_type;  // labeled benchmark mode only
  std::string dataset_id;
};

/// Two SQL, two script and one end-to-end candidate per question.
enum class Strategy { SqlA, SqlB, ScriptA, ScriptB, EndToEnd };
inline constexpr Strategy kAllStrategies[] = {Strategy::SqlA, Strategy::SqlB,
                                              Strategy::ScriptA, Strategy::ScriptB,
                                              Strategy::EndToEnd};

enum class CandidateStatus { Ok, ExecError, Timeout, ExtractionFailed };

enum class DecisionCategory {
  Agreement,
  LogicalFiltering,
  FormatMismatch,
  ConflictResolution,
  NoValidCandidate,
};
inline constexpr DecisionCategory kAllDecisionCategories[] = {
    DecisionCategory::Agreement, DecisionCategory::LogicalFiltering,
    DecisionCategory::FormatMismatch, DecisionCategory::ConflictResolution,
    DecisionCategory::NoValidCandidate};

std::string_view to_string(Strategy s) noexcept;
std::string_view to_string(CandidateStatus s) noexcept;
std::string_view to_string(DecisionCategory c) noexcept;
std::optional<Strategy> strategy_from_string(std::string_view s);
std::optional<CandidateStatus> candidate_status_from_string(std::string_view s);
std::optional<DecisionCategory> decision_category_from_string(std::string_view s);

/// One solver's output. `result` is present iff status is Ok and
/// `error_text` is present iff it is not; the factories enforce this.
class CandidateSolution {
 public:
  static CandidateSolution ok(Strategy strategy, std::string code, TypedAnswer result,
                              bool corrected);
  static CandidateSolution failed(Strategy strategy, std::string code,
                                  CandidateStatus status, std::string error_text,
                                  bool corrected);

  Strategy strategy() const noexcept { return strategy_; }
  const std::string& code() const noexcept { return code_; }
  CandidateStatus status() const noexcept { return status_; }
  bool is_ok() const noexcept { return status_ == CandidateStatus::Ok; }
  const std::optional<TypedAnswer>& result() const noexcept { return result_; }
  const std::optional<std::string>& error_text() const noexcept { return error_text_; }
  bool corrected() const noexcept { return corrected_; }

  friend bool operator==(const CandidateSolution&, const CandidateSolution&) = default;

 private:
  CandidateSolution() = default;

  Strategy strategy_ = Strategy::SqlA;
  std::string code_;
  CandidateStatus status_ = CandidateStatus::Ok;
  std::optional<TypedAnswer> result_;
  std::optional<std::string> error_text_;
  bool corrected_ = false;
};

/// One model round trip as seen by the trace. `completion` is empty when the
/// call itself failed, in which case `error` says why.
struct Exchange {
  std::string tag;  // e.g. "sql_a", "sql_a.correction", "orchestrator.select"
  std::string prompt;
  std::optional<std::string> completion;
  std::optional<std::string> error;
};

using Transcript = std::vector<Exchange>;

struct PipelineTrace {
  std::string question_id;
  Transcript exchanges;
  std::vector<CandidateSolution> candidates;
  std::optional<std::size_t> chosen_index;
  DecisionCategory decision_category = DecisionCategory::NoValidCandidate;
  std::optional<TypedAnswer> final_answer;
  std::optional<AnswerType> predicted_type;
  std::string reasoning;
  std::optional<std::string> error;  // set when the question failed before orchestration
  std::uint64_t wall_time_ms = 0;

  /// Completions recorded under `tag` or `tag.correction`.
  std::size_t completions_for(std::string_view tag) const;
};

nlohmann::json candidate_to_json(const CandidateSolution& c);
CandidateSolution candidate_from_json(const nlohmann::json& j);

/// Trace as an exact-JSON tree; dump with json_exact::dump. `wall_time_ms` is
/// the only field that varies between otherwise identical runs.
nlohmann::json trace_to_json(const PipelineTrace& trace);
PipelineTrace trace_from_json(const nlohmann::json& j);

}  // namespace tabqa
