#include "tabqa/bench/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <future>
#include <semaphore>

#include "tabqa/e2e/solver_e2e.hpp"
#include "tabqa/error.hpp"
#include "tabqa/orchestrator/orchestrator.hpp"
#include "tabqa/script/solver_script.hpp"
#include "tabqa/sql/solver_sql.hpp"
#include "tabqa/table/columns.hpp"

namespace tabqa::bench {

const llm::ModelRole& PipelineContext::role(std::string_view name) const {
  auto it = roles.find(name);
  if (it == roles.end()) throw Error(ErrorKind::Config, "no model configured for role '" + std::string(name) + "'");
  return it->second;
}

void PipelineContext::flush() const {
  if (recorder) recorder->save();
  if (!config.embedding_cache.empty()) embedding_cache.save(config.embedding_cache);
}

std::unique_ptr<PipelineContext> make_context(const RunConfig& cfg, std::shared_ptr<llm::Gateway> gateway) {
  validate(cfg);
  auto ctx = std::make_unique<PipelineContext>();
  ctx->config = cfg;

  std::string api_key;
  if (const char* key = std::getenv(cfg.api_key_env.c_str())) api_key = key;
  llm::Endpoint endpoint{cfg.endpoint_url, api_key, cfg.request_timeout, {}};

  if (cfg.mode == CassetteMode::Replay) {
    ctx->gateway = std::make_shared<llm::ReplayGateway>(llm::ReplayGateway::load(cfg.cassette, cfg.strict_cassette));
  } else {
    if (!gateway) gateway = std::make_shared<llm::HttpGateway>(endpoint);
    if (cfg.mode == CassetteMode::Record) {
      ctx->recorder = std::make_shared<llm::RecordingGateway>(gateway, cfg.cassette);
      ctx->gateway = ctx->recorder;
    } else {
      ctx->gateway = gateway;
    }
  }
  for (const auto& [name, rc] : cfg.roles) {
    ctx->roles[name] = llm::ModelRole{ctx->gateway, rc.model, rc.seed, rc.temperature, rc.max_tokens};
  }

  if (cfg.embedder == "trigram256") {
    ctx->embedder = std::make_unique<retrieval::TrigramEmbedder>();
  } else {
    llm::Endpoint emb = endpoint;
    if (!cfg.embedding_url.empty()) emb.base_url = cfg.embedding_url;
    ctx->embedder = std::make_unique<retrieval::HttpEmbedder>(emb, cfg.embedder);
  }
  if (!cfg.embedding_cache.empty() && std::filesystem::exists(cfg.embedding_cache)) {
    ctx->embedding_cache.load(cfg.embedding_cache);
  }
  if (!cfg.sandbox_command.empty()) ctx->sandbox.emplace(cfg.sandbox_command);
  return ctx;
}

PipelineTrace run_question(const Question& q, const table::TableHandle& t, PipelineContext& ctx) {
  const auto started = std::chrono::steady_clock::now();
  const RunConfig& cfg = ctx.config;
  PipelineTrace trace;
  trace.question_id = q.id;
  auto finish = [&]() {
    trace.wall_time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count());
    return trace;
  };

  table::ColumnSelection selection;
  std::vector<retrieval::RowMatch> matches;
  std::map<std::string, std::string> explanations;
  try {
    selection = table::select_columns(q, t, ctx.role("column_selector"), &trace.exchanges);
    if (cfg.explain_columns) explanations = table::explain_columns(t, ctx.role("column_selector"), &trace.exchanges);
    matches = retrieval::top_k_rows(q, t, selection, cfg.k_rows, *ctx.embedder, &ctx.embedding_cache);
  } catch (const std::exception& e) {
    trace.error = e.what();
    trace.decision_category = DecisionCategory::NoValidCandidate;
    return finish();
  }

  std::optional<AnswerType> hint = cfg.use_type_hints ? q.expected_type : std::nullopt;
  const auto* explain = cfg.explain_columns ? &explanations : nullptr;
  std::unique_ptr<script::TableSnapshot> snapshot;
  if (ctx.sandbox) {
    try {
      snapshot = std::make_unique<script::TableSnapshot>(t);
    } catch (const std::exception&) {
      // without a snapshot the script candidates fail like an absent sandbox
    }
  }
  const script::SandboxClient* sandbox = snapshot ? &*ctx.sandbox : nullptr;
  const std::filesystem::path snapshot_path = snapshot ? snapshot->path() : std::filesystem::path();

  using Job = std::function<CandidateSolution(Transcript*)>;
  auto sql_job = [&](Strategy s, const char* role) -> Job {
    return [&, s, role](Transcript* tr) {
      sql::SqlSolveOptions o{s, cfg.sql_timeout, hint, explain};
      return sql::solve_sql(q, t, selection, matches, ctx.role(role), o, tr);
    };
  };
  auto script_job = [&](Strategy s, const char* role) -> Job {
    return [&, s, role](Transcript* tr) {
      script::ScriptSolveOptions o{s, cfg.script_variant, cfg.sandbox_timeout, hint};
      return script::solve_script(q, t, selection, ctx.role(role), sandbox, snapshot_path, o, tr);
    };
  };
  std::vector<std::pair<Strategy, Job>> jobs = {
      {Strategy::SqlA, sql_job(Strategy::SqlA, "sql_a")},
      {Strategy::SqlB, sql_job(Strategy::SqlB, "sql_b")},
      {Strategy::ScriptA, script_job(Strategy::ScriptA, "script_a")},
      {Strategy::ScriptB, script_job(Strategy::ScriptB, "script_b")},
      {Strategy::EndToEnd,
       [&](Transcript* tr) { return e2e::solve_e2e(q, t, selection, matches, ctx.role("e2e"), cfg.e2e_row_limit, tr); }},
  };

  // Each candidate writes its own transcript; they are merged in fixed order
  // so traces do not depend on scheduling.
  std::vector<Transcript> transcripts(jobs.size());
  std::vector<std::future<CandidateSolution>> futures;
  std::counting_semaphore<64> slots(static_cast<std::ptrdiff_t>(std::min<std::size_t>(cfg.candidate_concurrency, 64)));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i]() {
      slots.acquire();
      struct Release {
        std::counting_semaphore<64>& s;
        ~Release() { s.release(); }
      } release{slots};
      try {
        return jobs[i].second(&transcripts[i]);
      } catch (const std::exception& e) {
        return CandidateSolution::failed(jobs[i].first, "", CandidateStatus::ExecError, e.what(), false);
      }
    }));
  }
  for (std::size_t i = 0; i < futures.size(); ++i) {
    trace.candidates.push_back(futures[i].get());
    for (auto& ex : transcripts[i]) trace.exchanges.push_back(std::move(ex));
  }

  bool any_ok = std::any_of(trace.candidates.begin(), trace.candidates.end(),
                            [](const CandidateSolution& c) { return c.is_ok(); });
  if (!any_ok) {
    trace.decision_category = DecisionCategory::NoValidCandidate;
    return finish();
  }
  orchestrator::OrchestratorVerdict verdict;
  try {
    verdict = orchestrator::select(q, trace.candidates, t, ctx.role("orchestrator"), &trace.exchanges);
  } catch (const std::exception& e) {
    // Selector unavailable: keep the lowest Ok candidate, never invent one.
    for (std::size_t i = 0; i < trace.candidates.size(); ++i) {
      if (trace.candidates[i].is_ok()) {
        verdict.chosen_index = i;
        break;
      }
    }
    verdict.category = DecisionCategory::ConflictResolution;
    verdict.reasoning = std::string("selector failed: ") + e.what();
  }
  trace.chosen_index = verdict.chosen_index;
  trace.decision_category = verdict.category;
  trace.predicted_type = verdict.predicted_type;
  trace.reasoning = verdict.reasoning;
  trace.final_answer = trace.candidates[verdict.chosen_index].result();
  return finish();
}

}  // namespace tabqa::bench
