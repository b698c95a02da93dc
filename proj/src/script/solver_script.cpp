#include "tabqa/script/solver_script.hpp"

#include <atomic>
#include <random>
#include <regex>

#include <unistd.h>

#include "tabqa/error.hpp"
#include "tabqa/llm/extract.hpp"
#include "tabqa/llm/templates.hpp"
#include "tabqa/table/render.hpp"

namespace tabqa::script {

namespace fs = std::filesystem;

std::optional<PromptVariant> prompt_variant_from_string(std::string_view s) {
  if (s == "standard") return PromptVariant::Standard;
  if (s == "dialogue") return PromptVariant::Dialogue;
  return std::nullopt;
}

TableSnapshot::TableSnapshot(const table::TableHandle& t) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  for (int attempt = 0; attempt < 16; ++attempt) {
    fs::path candidate = fs::temp_directory_path() /
                         ("tabqa-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
                          std::to_string(rd() % 100000));
    std::error_code ec;
    if (fs::create_directory(candidate, ec)) {
      dir_ = candidate;
      break;
    }
  }
  if (dir_.empty()) throw Error(ErrorKind::Io, "cannot create a snapshot directory");
  path_ = dir_ / "table.csv";
  table::write_csv(t, path_);
}

TableSnapshot::~TableSnapshot() {
  std::error_code ec;
  fs::remove_all(dir_, ec);
}

namespace {

std::vector<std::size_t> all_indices(const table::TableHandle& t) {
  std::vector<std::size_t> out(t.column_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::string strip_inline_ticks(std::string code) {
  if (code.size() >= 2 && code.front() == '`' && code.back() == '`') {
    code = llm::trim(std::string_view(code).substr(1, code.size() - 2));
  }
  if (code.rfind("python ", 0) == 0) code = llm::trim(std::string_view(code).substr(7));
  return code;
}

}  // namespace

std::string build_script_prompt(const Question& q, const table::TableHandle& t,
                                const table::ColumnSelection& sel, PromptVariant variant) {
  auto cols = table::column_indices(t, sel.selected);
  auto name = variant == PromptVariant::Dialogue ? llm::prompt::kScriptGenerationDialogue
                                                 : llm::prompt::kScriptGeneration;
  return llm::render_template(name, {{"question", q.text},
                                     {"columns", table::python_list(sel.selected)},
                                     {"rows", "\n" + table::text_grid(t, cols, table::first_rows(t, 3))}});
}

std::string build_script_correction_prompt(const Question& q, const table::TableHandle& t,
                                           const std::vector<std::string>& tracebacks) {
  std::string joined;
  for (std::size_t i = 0; i < tracebacks.size(); ++i) {
    if (i) joined += "\n";
    joined += "Solution " + std::to_string(i + 1) + " Error:\n" + tracebacks[i] + "\n";
  }
  auto cols = all_indices(t);
  return llm::render_template(llm::prompt::kSelfCorrection,
                              {{"question", q.text},
                               {"tracebacks", joined},
                               {"columns", table::python_dtype_pairs(t, cols)},
                               {"first_row", t.row_count() ? table::python_row_dict(t, cols, 0) : "{}"}});
}

void validate_script(std::string_view code) {
  if (code.find_first_of("\r\n") != std::string_view::npos) {
    throw Error(ErrorKind::NotSingleLine, "script spans several lines");
  }
  static const std::regex assignment(R"((^|;)\s*result\s*=(?!=))");
  if (!std::regex_search(code.begin(), code.end(), assignment)) {
    throw Error(ErrorKind::NoResultAssignment, "script never assigns to 'result'");
  }
}

std::string extract_script(std::string_view completion) {
  std::string code = strip_inline_ticks(llm::extract_code_block(completion));
  validate_script(code);
  return code;
}

CandidateSolution execute_job(Strategy strategy, const ScriptJob& job, const SandboxClient& sandbox,
                              bool corrected) {
  static std::atomic<std::uint64_t> next_id{0};
  SandboxRequest req{std::string(to_string(strategy)) + "-" + std::to_string(next_id++), job.code,
                     job.table_ref, job.timeout_ms};
  try {
    SandboxResponse resp = sandbox.run(req);
    switch (resp.status) {
      case SandboxStatus::Ok:
        return CandidateSolution::ok(strategy, job.code, std::move(*resp.result), corrected);
      case SandboxStatus::Timeout:
        return CandidateSolution::failed(strategy, job.code, CandidateStatus::Timeout,
                                         "script exceeded " + std::to_string(job.timeout_ms) + " ms", corrected);
      case SandboxStatus::Error:
        break;
    }
    return CandidateSolution::failed(strategy, job.code, CandidateStatus::ExecError,
                                     resp.error_text.value_or("script failed"), corrected);
  } catch (const std::exception& e) {
    return CandidateSolution::failed(strategy, job.code, CandidateStatus::ExecError, e.what(), corrected);
  }
}

CandidateSolution solve_script(const Question& q, const table::TableHandle& t,
                               const table::ColumnSelection& sel, const llm::ModelRole& role,
                               const SandboxClient* sandbox, const fs::path& snapshot,
                               const ScriptSolveOptions& options, Transcript* transcript) {
  const Strategy s = options.strategy;
  if (!sandbox) return CandidateSolution::failed(s, "", CandidateStatus::ExecError, "sandbox runner not configured", false);
  const std::string tag(to_string(s));

  auto attempt = [&](const std::string& completion, bool bare_line_fallback, bool corrected) {
    std::string code;
    try {
      code = extract_script(completion);
    } catch (const Error& e) {
      std::string bare = strip_inline_ticks(llm::trim(completion));
      bool usable = bare_line_fallback && e.kind() == ErrorKind::NoCodeFound && !bare.empty();
      if (usable) {
        try {
          validate_script(bare);
          code = bare;
        } catch (const Error&) {
          usable = false;
        }
      }
      if (!usable) return CandidateSolution::failed(s, "", CandidateStatus::ExtractionFailed, e.what(), corrected);
    }
    ScriptJob job{code, snapshot, options.timeout.count(), options.type_hint};
    return execute_job(s, job, *sandbox, corrected);
  };

  std::string completion;
  try {
    completion = llm::ask(role, tag, build_script_prompt(q, t, sel, options.variant), transcript);
  } catch (const std::exception& e) {
    return CandidateSolution::failed(s, "", CandidateStatus::ExecError, e.what(), false);
  }
  CandidateSolution first = attempt(completion, false, false);
  if (first.is_ok()) return first;

  std::string traceback = first.code().empty() ? *first.error_text() : first.code() + "\n" + *first.error_text();
  try {
    completion = llm::ask(role, tag + ".correction", build_script_correction_prompt(q, t, {traceback}), transcript);
  } catch (const std::exception& e) {
    return CandidateSolution::failed(s, first.code(), first.status(),
                                     *first.error_text() + "\ncorrection request failed: " + e.what(), true);
  }
  return attempt(completion, true, true);
}

}  // namespace tabqa::script
