#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "tabqa/bench/config.hpp"
#include "tabqa/llm/call.hpp"
#include "tabqa/llm/gateway.hpp"
#include "tabqa/model.hpp"
#include "tabqa/retrieval/embedder.hpp"
#include "tabqa/retrieval/retrieval.hpp"
#include "tabqa/script/sandbox_client.hpp"
#include "tabqa/table/table.hpp"

namespace tabqa::bench {

/// Everything a run shares between questions.
struct PipelineContext {
  RunConfig config;
  std::shared_ptr<llm::Gateway> gateway;
  std::shared_ptr<llm::RecordingGateway> recorder;  // record mode only
  std::map<std::string, llm::ModelRole, std::less<>> roles;
  std::unique_ptr<retrieval::Embedder> embedder;
  retrieval::EmbeddingCache embedding_cache;
  std::optional<script::SandboxClient> sandbox;

  const llm::ModelRole& role(std::string_view name) const;
  /// Writes the cassette (record mode) and the embedding cache, if any.
  void flush() const;
};

/// Validates `cfg` and builds the gateway stack for its mode. `gateway`
/// replaces the live endpoint (record mode wraps it; replay ignores it).
std::unique_ptr<PipelineContext> make_context(const RunConfig& cfg,
                                              std::shared_ptr<llm::Gateway> gateway = nullptr);

/// Column selection, retrieval, five candidates (run concurrently), then
/// orchestration. Never throws: failures before orchestration end up in
/// `trace.error` with decision NoValidCandidate.
PipelineTrace run_question(const Question& q, const table::TableHandle& t, PipelineContext& ctx);

}  // namespace tabqa::bench
