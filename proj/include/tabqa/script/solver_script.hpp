#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabqa/llm/call.hpp"
#include "tabqa/model.hpp"
#include "tabqa/script/sandbox_client.hpp"
#include "tabqa/table/columns.hpp"

namespace tabqa::script {

inline constexpr std::chrono::milliseconds kDefaultSandboxTimeout{30000};

enum class PromptVariant { Standard, Dialogue };
std::optional<PromptVariant> prompt_variant_from_string(std::string_view s);

struct ScriptJob {
  std::string code;  // no newlines
  std::filesystem::path table_ref;
  std::int64_t timeout_ms = kDefaultSandboxTimeout.count();
  std::optional<AnswerType> expected_type;
};

/// CSV copy of a table with sanitized headers in a private temp directory,
/// removed on destruction.
class TableSnapshot {
 public:
  explicit TableSnapshot(const table::TableHandle& t);
  ~TableSnapshot();
  TableSnapshot(const TableSnapshot&) = delete;
  TableSnapshot& operator=(const TableSnapshot&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path dir_;
  std::filesystem::path path_;
};

/// Selected columns as a list literal, first three rows as a text grid.
std::string build_script_prompt(const Question& q, const table::TableHandle& t,
                                const table::ColumnSelection& sel, PromptVariant variant);

std::string build_script_correction_prompt(const Question& q, const table::TableHandle& t,
                                           const std::vector<std::string>& tracebacks);

/// Code from the last fence or after the last fuzzy "Code:" marker.
/// Throws NoCodeFound, NotSingleLine or NoResultAssignment.
std::string extract_script(std::string_view completion);

/// Throws NotSingleLine or NoResultAssignment.
void validate_script(std::string_view code);

/// Runs a job through the sandbox, mapping the response to a status.
CandidateSolution execute_job(Strategy strategy, const ScriptJob& job, const SandboxClient& sandbox,
                              bool corrected);

struct ScriptSolveOptions {
  Strategy strategy = Strategy::ScriptA;
  PromptVariant variant = PromptVariant::Standard;
  std::chrono::milliseconds timeout = kDefaultSandboxTimeout;
  std::optional<AnswerType> type_hint;
};

/// prompt -> completion -> extract -> sandbox -> typed result, with one
/// self-correction round on failure (at most two completions and two sandbox
/// runs). Never throws. Without a sandbox the candidate is an ExecError and
/// no completion is requested.
CandidateSolution solve_script(const Question& q, const table::TableHandle& t,
                               const table::ColumnSelection& sel, const llm::ModelRole& role,
                               const SandboxClient* sandbox, const std::filesystem::path& snapshot,
                               const ScriptSolveOptions& options = {},
                               Transcript* transcript = nullptr);

}  // namespace tabqa::script
