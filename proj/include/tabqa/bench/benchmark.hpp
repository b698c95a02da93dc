#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabqa/bench/pipeline.hpp"
#include "tabqa/eval/evaluator.hpp"

namespace tabqa::bench {

struct BenchmarkQuestion {
  Question question;
  std::optional<TypedAnswer> expected;  // absent in unlabeled files
};

/// JSON-lines `{id, dataset_id, question, expected_type, expected_answer}`.
/// Throws Error(Io) or Error(MalformedAnswer) with the offending line.
std::vector<BenchmarkQuestion> load_questions(const std::filesystem::path& path);

/// `<dir>/<id>.csv`, else `<dir>/<id>/all.csv`; nullopt when neither exists.
std::optional<std::filesystem::path> find_table(const std::filesystem::path& dataset_dir,
                                                const std::string& dataset_id);

struct BenchmarkResult {
  std::vector<PipelineTrace> traces;
  std::vector<eval::ScoredPair> pairs;
  eval::ScoreReport report;
};

/// Runs every question in order. A question whose table cannot be loaded
/// gets a failed trace and scores as incorrect; the run always completes.
/// With a non-empty `output_dir` writes traces.jsonl, score_input.jsonl,
/// score.json and score.txt there.
BenchmarkResult run_benchmark(const std::filesystem::path& dataset_dir,
                              const std::filesystem::path& questions_file, PipelineContext& ctx,
                              const std::filesystem::path& output_dir = {});

void write_traces(const std::vector<PipelineTrace>& traces, const std::filesystem::path& path);
std::vector<PipelineTrace> load_traces(const std::filesystem::path& path);

}  // namespace tabqa::bench
