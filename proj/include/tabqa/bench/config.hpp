#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tabqa/script/solver_script.hpp"

namespace tabqa::bench {

enum class CassetteMode { Live, Record, Replay };
std::string_view to_string(CassetteMode m) noexcept;
std::optional<CassetteMode> cassette_mode_from_string(std::string_view s);

/// Model roles that must be present in every config.
inline constexpr std::string_view kRequiredRoles[] = {"sql_a",    "sql_b", "script_a",     "script_b",
                                                      "e2e",      "orchestrator", "column_selector"};

struct RoleConfig {
  std::string model;
  std::optional<std::int64_t> seed;
  double temperature = 0.0;
  int max_tokens = 2048;
};

struct RunConfig {
  std::map<std::string, RoleConfig, std::less<>> roles;
  std::string embedder = "trigram256";  // anything else is an embeddings-endpoint model
  std::string endpoint_url;
  std::string api_key_env = "TABQA_API_KEY";
  std::string embedding_url;  // defaults to endpoint_url
  std::chrono::milliseconds request_timeout{120000};
  CassetteMode mode = CassetteMode::Live;
  std::filesystem::path cassette;
  bool strict_cassette = false;
  std::size_t k_rows = 3;
  std::size_t e2e_row_limit = 20;
  std::chrono::milliseconds sql_timeout{10000};
  std::chrono::milliseconds sandbox_timeout{30000};
  script::PromptVariant script_variant = script::PromptVariant::Standard;
  bool explain_columns = false;
  std::vector<std::string> sandbox_command;  // empty: script candidates fail fast
  std::filesystem::path output_dir = "out";
  std::filesystem::path embedding_cache;  // optional JSON-lines file
  std::size_t candidate_concurrency = 5;
  bool use_type_hints = true;  // pass a question's labeled type to the solvers as a format hint
};

/// Relative paths are resolved against `base_dir`. Unknown keys are
/// rejected. Throws Error(Config).
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Throws Error(Config) naming the first problem.
void validate(const RunConfig& cfg);

}  // namespace tabqa::bench
