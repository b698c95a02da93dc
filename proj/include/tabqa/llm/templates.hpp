#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace tabqa::llm {

using Bindings = std::map<std::string, std::string>;

/// Template ids shipped with the library.
namespace prompt {
inline constexpr std::string_view kSqlGeneration = "sql_gen";
inline constexpr std::string_view kScriptGeneration = "python_gen";
inline constexpr std::string_view kScriptGenerationDialogue = "python_gen_dialogue";
inline constexpr std::string_view kSelfCorrection = "self_correction";
inline constexpr std::string_view kSelfCorrectionSql = "self_correction_sql";
inline constexpr std::string_view kOrchestrator = "orchestrator";
inline constexpr std::string_view kAnswerType = "answer_type";
inline constexpr std::string_view kEndToEnd = "e2e";
inline constexpr std::string_view kColumnSelection = "column_select";
inline constexpr std::string_view kColumnExplanation = "column_explain";
}  // namespace prompt

/// Substitutes every `{{key}}` in `text`. Throws Error(UnboundPlaceholder)
/// naming all missing keys. Bound values are inserted with any `{{` broken
/// up as `{ {`, so the output never contains an unresolved placeholder.
std::string render_text(std::string_view text, const Bindings& bindings);

/// Named prompt templates (`{{name}}` placeholder syntax).
class TemplateStore {
 public:
  /// The templates compiled into the library from assets/prompts.
  static const TemplateStore& builtin();
  /// Loads every `*.txt` file; the id is the file stem.
  static TemplateStore from_directory(const std::filesystem::path& dir);

  void add(std::string name, std::string text);
  bool contains(std::string_view name) const;
  /// Throws Error(UnknownTemplate).
  const std::string& text(std::string_view name) const;
  std::string render(std::string_view name, const Bindings& bindings) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

/// Renders a built-in template.
std::string render_template(std::string_view name, const Bindings& bindings);

}  // namespace tabqa::llm
