#include "tabqa/model.hpp"

#include "tabqa/error.hpp"

namespace tabqa {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view name, const Enum (&all)[N]) {
  for (Enum e : all) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

constexpr CandidateStatus kAllStatuses[] = {CandidateStatus::Ok, CandidateStatus::ExecError,
                                            CandidateStatus::Timeout,
                                            CandidateStatus::ExtractionFailed};

}  // namespace

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::SqlA: return "sql_a";
    case Strategy::SqlB: return "sql_b";
    case Strategy::ScriptA: return "script_a";
    case Strategy::ScriptB: return "script_b";
    case Strategy::EndToEnd: return "e2e";
  }
  return "unknown";
}

std::string_view to_string(CandidateStatus s) noexcept {
  switch (s) {
    case CandidateStatus::Ok: return "ok";
    case CandidateStatus::ExecError: return "exec_error";
    case CandidateStatus::Timeout: return "timeout";
    case CandidateStatus::ExtractionFailed: return "extraction_failed";
  }
  return "unknown";
}

std::string_view to_string(DecisionCategory c) noexcept {
  switch (c) {
    case DecisionCategory::Agreement: return "agreement";
    case DecisionCategory::LogicalFiltering: return "logical_filtering";
    case DecisionCategory::FormatMismatch: return "format_mismatch";
    case DecisionCategory::ConflictResolution: return "conflict_resolution";
    case DecisionCategory::NoValidCandidate: return "no_valid_candidate";
  }
  return "unknown";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
  return lookup(s, kAllStrategies);
}
std::optional<CandidateStatus> candidate_status_from_string(std::string_view s) {
  return lookup(s, kAllStatuses);
}
std::optional<DecisionCategory> decision_category_from_string(std::string_view s) {
  return lookup(s, kAllDecisionCategories);
}

CandidateSolution CandidateSolution::ok(Strategy strategy, std::string code,
                                        TypedAnswer result, bool corrected) {
  CandidateSolution c;
  c.strategy_ = strategy;
  c.code_ = std::move(code);
  c.status_ = CandidateStatus::Ok;
  c.result_ = std::move(result);
  c.corrected_ = corrected;
  return c;
}

CandidateSolution CandidateSolution::failed(Strategy strategy, std::string code,
                                            CandidateStatus status, std::string error_text,
                                            bool corrected) {
  if (status == CandidateStatus::Ok) {
    throw std::invalid_argument("failed candidate cannot carry status Ok");
  }
  CandidateSolution c;
  c.strategy_ = strategy;
  c.code_ = std::move(code);
  c.status_ = status;
  c.error_text_ = std::move(error_text);
  c.corrected_ = corrected;
  return c;
}

std::size_t PipelineTrace::completions_for(std::string_view tag) const {
  std::string correction = std::string(tag) + ".correction";
  std::size_t n = 0;
  for (const auto& e : exchanges) {
    if (e.completion && (e.tag == tag || e.tag == correction)) ++n;
  }
  return n;
}

json candidate_to_json(const CandidateSolution& c) {
  json j;
  j["strategy"] = std::string(to_string(c.strategy()));
  j["code"] = c.code();
  j["status"] = std::string(to_string(c.status()));
  j["result"] = c.result() ? answer_to_json(*c.result()) : json(nullptr);
  j["error_text"] = c.error_text() ? json(*c.error_text()) : json(nullptr);
  j["corrected"] = c.corrected();
  return j;
}

CandidateSolution candidate_from_json(const json& j) {
  auto strategy = strategy_from_string(j.at("strategy").get<std::string>());
  auto status = candidate_status_from_string(j.at("status").get<std::string>());
  if (!strategy || !status) throw Error(ErrorKind::Io, "bad candidate record");
  if (*status == CandidateStatus::Ok) {
    return CandidateSolution::ok(*strategy, j.at("code").get<std::string>(),
                                 answer_from_json(j.at("result")), j.at("corrected").get<bool>());
  }
  return CandidateSolution::failed(*strategy, j.at("code").get<std::string>(), *status,
                                   j.at("error_text").get<std::string>(),
                                   j.at("corrected").get<bool>());
}

json trace_to_json(const PipelineTrace& t) {
  json prompts = json::array();
  json completions = json::array();
  for (const auto& e : t.exchanges) {
    prompts.push_back({{"tag", e.tag}, {"text", e.prompt}});
    if (e.completion) {
      completions.push_back({{"tag", e.tag}, {"text", *e.completion}});
    } else {
      completions.push_back({{"tag", e.tag}, {"text", nullptr}, {"error", e.error.value_or("")}});
    }
  }
  json candidates = json::array();
  for (const auto& c : t.candidates) candidates.push_back(candidate_to_json(c));

  json j;
  j["question_id"] = t.question_id;
  j["prompts"] = std::move(prompts);
  j["completions"] = std::move(completions);
  j["candidates"] = std::move(candidates);
  j["chosen_index"] = t.chosen_index ? json(*t.chosen_index) : json(nullptr);
  j["decision_category"] = std::string(to_string(t.decision_category));
  j["predicted_type"] =
      t.predicted_type ? json(std::string(to_string(*t.predicted_type))) : json(nullptr);
  j["reasoning"] = t.reasoning;
  j["final_answer"] = t.final_answer ? answer_to_json(*t.final_answer) : json(nullptr);
  j["error"] = t.error ? json(*t.error) : json(nullptr);
  j["wall_time_ms"] = t.wall_time_ms;
  return j;
}

PipelineTrace trace_from_json(const json& j) {
  PipelineTrace t;
  t.question_id = j.at("question_id").get<std::string>();
  const auto& prompts = j.at("prompts");
  const auto& completions = j.at("completions");
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    Exchange e;
    e.tag = prompts[i].at("tag").get<std::string>();
    e.prompt = prompts[i].at("text").get<std::string>();
    if (i < completions.size()) {
      const auto& c = completions[i];
      if (c.at("text").is_string()) e.completion = c.at("text").get<std::string>();
      if (c.contains("error")) e.error = c.at("error").get<std::string>();
    }
    t.exchanges.push_back(std::move(e));
  }
  for (const auto& c : j.at("candidates")) t.candidates.push_back(candidate_from_json(c));
  if (!j.at("chosen_index").is_null()) t.chosen_index = j.at("chosen_index").get<std::size_t>();
  auto category = decision_category_from_string(j.at("decision_category").get<std::string>());
  if (!category) throw Error(ErrorKind::Io, "bad decision category");
  t.decision_category = *category;
  if (j.contains("predicted_type") && j["predicted_type"].is_string()) {
    t.predicted_type = answer_type_from_string(j["predicted_type"].get<std::string>());
  }
  t.reasoning = j.value("reasoning", "");
  if (!j.at("final_answer").is_null()) t.final_answer = answer_from_json(j.at("final_answer"));
  if (j.contains("error") && j["error"].is_string()) t.error = j["error"].get<std::string>();
  t.wall_time_ms = j.value("wall_time_ms", std::uint64_t{0});
  return t;
}

}  // namespace tabqa
