#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "tabqa/bench/benchmark.hpp"
#include "tabqa/bench/config.hpp"
#include "tabqa/bench/pipeline.hpp"
#include "tabqa/bench/stats.hpp"
#include "tabqa/error.hpp"
#include "tabqa/eval/evaluator.hpp"
#include "tabqa/exact_json.hpp"

namespace fs = std::filesystem;
using namespace tabqa;

namespace {

struct Common {
  std::string config;
  std::string mode;
  std::string cassette;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", c.mode, "live, record or replay (overrides the config)")
      ->check(CLI::IsMember({"live", "record", "replay"}));
  cmd->add_option("--cassette", c.cassette, "cassette path (overrides the config)");
}

bench::RunConfig resolve_config(const Common& c) {
  bench::RunConfig cfg = bench::load_config(c.config);
  if (!c.mode.empty()) cfg.mode = *bench::cassette_mode_from_string(c.mode);
  if (!c.cassette.empty()) cfg.cassette = c.cassette;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Table question answering pipeline and benchmark harness"};
  app.require_subcommand(1);

  Common run_opts;
  std::string dataset_dir, questions, output;
  auto* run = app.add_subcommand("run", "Answer every question in a benchmark file and score the run");
  add_common(run, run_opts);
  run->add_option("-d,--datasets", dataset_dir, "directory holding <dataset_id>.csv tables")
      ->required()->check(CLI::ExistingDirectory);
  run->add_option("-q,--questions", questions, "questions JSON-lines file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "output directory (overrides the config)");

  Common ask_opts;
  std::string table_path, question_text, expected_type;
  auto* ask = app.add_subcommand("ask", "Answer a single question about one table");
  add_common(ask, ask_opts);
  ask->add_option("-t,--table", table_path, "CSV table")->required()->check(CLI::ExistingFile);
  ask->add_option("question", question_text, "question text")->required();
  ask->add_option("--type", expected_type, "expected answer type, used as a format hint");
  bool ask_trace = false;
  ask->add_flag("--trace", ask_trace, "print the full trace as JSON");

  std::string score_input;
  bool score_json = false;
  auto* score = app.add_subcommand("score", "Score a JSON-lines file of expected/got pairs");
  score->add_option("input", score_input, "score input file")->required()->check(CLI::ExistingFile);
  score->add_flag("--json", score_json, "print the report as JSON");

  std::string traces_path;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Decision and failure statistics over a trace archive");
  stats->add_option("traces", traces_path, "traces.jsonl")->required()->check(CLI::ExistingFile);
  stats->add_flag("--json", stats_json, "print the statistics as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      bench::RunConfig cfg = resolve_config(run_opts);
      if (!output.empty()) cfg.output_dir = output;
      auto ctx = bench::make_context(cfg);
      auto result = bench::run_benchmark(dataset_dir, questions, *ctx, cfg.output_dir);
      std::cout << eval::report_to_text(result.report);
      std::cout << "traces written to " << (cfg.output_dir / "traces.jsonl").string() << "\n";
    } else if (*ask) {
      bench::RunConfig cfg = resolve_config(ask_opts);
      auto ctx = bench::make_context(cfg);
      auto table = table::load_table(table_path);
      Question q{"ask", question_text, std::nullopt, table->dataset_id()};
      if (!expected_type.empty()) {
        q.expected_type = answer_type_from_string(expected_type);
        if (!q.expected_type) throw Error(ErrorKind::Config, "unknown answer type '" + expected_type + "'");
      }
      auto trace = bench::run_question(q, *table, *ctx);
      ctx->flush();
      if (ask_trace) {
        std::cout << json_exact::dump(trace_to_json(trace)) << "\n";
      } else if (trace.final_answer) {
        std::cout << display_text(*trace.final_answer) << "\n";
      } else {
        std::cout << "no answer (" << to_string(trace.decision_category) << ")"
                  << (trace.error ? ": " + *trace.error : std::string()) << "\n";
      }
    } else if (*score) {
      auto report = eval::score_run(eval::load_pairs(score_input));
      std::cout << (score_json ? eval::report_to_json(report).dump(2) + "\n" : eval::report_to_text(report));
    } else if (*stats) {
      auto report = bench::report_stats(bench::load_traces(traces_path));
      std::cout << (stats_json ? bench::stats_to_json(report).dump(2) + "\n" : bench::stats_to_text(report));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
