#include "tabqa/bench/config.hpp"

#include <fstream>
#include <set>

#include "tabqa/error.hpp"

namespace tabqa::bench {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(CassetteMode m) noexcept {
  switch (m) {
    case CassetteMode::Live: return "live";
    case CassetteMode::Record: return "record";
    case CassetteMode::Replay: return "replay";
  }
  return "live";
}

std::optional<CassetteMode> cassette_mode_from_string(std::string_view s) {
  for (auto m : {CassetteMode::Live, CassetteMode::Record, CassetteMode::Replay}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Config, what); }

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) bad("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    bad(std::string("key '") + key + "' has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::size_t positive(const json& j, const char* key, std::size_t fallback) {
  auto v = get<std::int64_t>(j, key, static_cast<std::int64_t>(fallback));
  if (v <= 0) bad(std::string("'") + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

}  // namespace

RunConfig config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) bad("config must be a JSON object");
  reject_unknown(j,
                 {"roles", "embedder", "endpoint_url", "api_key_env", "embedding_url", "request_timeout_ms", "mode",
                  "cassette", "strict_cassette", "k_rows", "e2e_row_limit", "sql_timeout_ms", "sandbox_timeout_ms",
                  "script_variant", "explain_columns", "sandbox_command", "output_dir", "embedding_cache",
                  "candidate_concurrency", "use_type_hints"},
                 "config");
  RunConfig cfg;
  if (auto it = j.find("roles"); it != j.end()) {
    if (!it->is_object()) bad("'roles' must be an object");
    for (const auto& [name, role] : it->items()) {
      RoleConfig rc;
      if (role.is_string()) {
        rc.model = role.get<std::string>();
      } else if (role.is_object()) {
        reject_unknown(role, {"model", "seed", "temperature", "max_tokens"}, "role " + name);
        rc.model = get<std::string>(role, "model", "");
        if (role.contains("seed") && !role["seed"].is_null()) rc.seed = get<std::int64_t>(role, "seed", 0);
        rc.temperature = get<double>(role, "temperature", 0.0);
        rc.max_tokens = get<int>(role, "max_tokens", 2048);
      } else {
        bad("role '" + name + "' must be a model name or an object");
      }
      cfg.roles[name] = rc;
    }
  }
  cfg.embedder = get<std::string>(j, "embedder", cfg.embedder);
  cfg.endpoint_url = get<std::string>(j, "endpoint_url", "");
  cfg.api_key_env = get<std::string>(j, "api_key_env", cfg.api_key_env);
  cfg.embedding_url = get<std::string>(j, "embedding_url", "");
  cfg.request_timeout = std::chrono::milliseconds(positive(j, "request_timeout_ms", 120000));
  std::string mode = get<std::string>(j, "mode", "live");
  auto m = cassette_mode_from_string(mode);
  if (!m) bad("unknown mode '" + mode + "'");
  cfg.mode = *m;
  cfg.cassette = resolve(base_dir, get<std::string>(j, "cassette", ""));
  cfg.strict_cassette = get<bool>(j, "strict_cassette", false);
  cfg.k_rows = positive(j, "k_rows", cfg.k_rows);
  cfg.e2e_row_limit = positive(j, "e2e_row_limit", cfg.e2e_row_limit);
  cfg.sql_timeout = std::chrono::milliseconds(positive(j, "sql_timeout_ms", 10000));
  cfg.sandbox_timeout = std::chrono::milliseconds(positive(j, "sandbox_timeout_ms", 30000));
  std::string variant = get<std::string>(j, "script_variant", "standard");
  auto v = script::prompt_variant_from_string(variant);
  if (!v) bad("unknown script_variant '" + variant + "'");
  cfg.script_variant = *v;
  cfg.explain_columns = get<bool>(j, "explain_columns", false);
  cfg.sandbox_command = get<std::vector<std::string>>(j, "sandbox_command", {});
  if (!cfg.sandbox_command.empty()) {
    fs::path exe(cfg.sandbox_command.front());
    if (exe.has_parent_path() && exe.is_relative()) cfg.sandbox_command.front() = (base_dir / exe).string();
  }
  cfg.output_dir = resolve(base_dir, get<std::string>(j, "output_dir", "out"));
  cfg.embedding_cache = resolve(base_dir, get<std::string>(j, "embedding_cache", ""));
  cfg.candidate_concurrency = positive(j, "candidate_concurrency", cfg.candidate_concurrency);
  cfg.use_type_hints = get<bool>(j, "use_type_hints", true);
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

void validate(const RunConfig& cfg) {
  for (auto role : kRequiredRoles) {
    auto it = cfg.roles.find(role);
    if (it == cfg.roles.end() || it->second.model.empty()) bad("no model configured for role '" + std::string(role) + "'");
  }
  if (cfg.mode != CassetteMode::Live && cfg.cassette.empty()) {
    bad(std::string(to_string(cfg.mode)) + " mode requires a cassette path");
  }
  if (cfg.mode != CassetteMode::Replay && cfg.endpoint_url.empty()) {
    bad(std::string(to_string(cfg.mode)) + " mode requires endpoint_url");
  }
  if (cfg.mode == CassetteMode::Replay && cfg.embedder != "trigram256") {
    bad("replay mode needs the local trigram256 embedder; embedding calls are not recorded");
  }
}

}  // namespace tabqa::bench
