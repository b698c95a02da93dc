#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "fixture_script.hpp"
#include "tabqa/bench/benchmark.hpp"
#include "tabqa/bench/config.hpp"
#include "tabqa/bench/pipeline.hpp"
#include "tabqa/bench/stats.hpp"
#include "tabqa/exact_json.hpp"
#include "test_util.hpp"

using namespace tabqa;
using namespace tabqa::bench;
using nlohmann::json;
using tabqa::testing::fixture_dir;
using tabqa::testing::kind_of;
using tabqa::testing::temp_path;
namespace fs = std::filesystem;

namespace {

fs::path bench_dir() { return fixture_dir() / "bench"; }

json base_config() {
  std::ifstream in(bench_dir() / "config.json");
  return json::parse(in);
}

std::string traces_without_time(const std::vector<PipelineTrace>& traces) {
  std::string out;
  for (const auto& t : traces) {
    json j = trace_to_json(t);
    j.erase("wall_time_ms");
    out += json_exact::dump(j) + "\n";
  }
  return out;
}

BenchmarkResult replay_fixture(const fs::path& out = {}) {
  auto ctx = make_context(load_config(bench_dir() / "config.json"));
  return run_benchmark(bench_dir() / "tables", bench_dir() / "questions.jsonl", *ctx, out);
}

std::string run_command(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  *status = ::pclose(p);
  return out;
}

}  // namespace

TEST(Config, LoadsFixtureAndResolvesPaths) {
  auto cfg = load_config(bench_dir() / "config.json");
  EXPECT_EQ(cfg.mode, CassetteMode::Replay);
  EXPECT_EQ(cfg.cassette, bench_dir() / "cassette.jsonl");
  EXPECT_EQ(cfg.roles.at("sql_b").model, "qwen2.5-coder-32b");
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, RejectsInvalidSettings) {
  auto bad = [](const std::function<void(json&)>& edit) {
    json j = base_config();
    edit(j);
    return kind_of([&] { validate(config_from_json(j, bench_dir())); });
  };
  EXPECT_EQ(bad([](json& j) { j["colour"] = "blue"; }), ErrorKind::Config);
  EXPECT_EQ(bad([](json& j) { j["roles"].erase("e2e"); }), ErrorKind::Config);
  EXPECT_EQ(bad([](json& j) { j.erase("cassette"); }), ErrorKind::Config);
  EXPECT_EQ(bad([](json& j) { j["mode"] = "live"; }), ErrorKind::Config);
  EXPECT_EQ(bad([](json& j) { j["mode"] = "sideways"; }), ErrorKind::Config);
  EXPECT_EQ(bad([](json& j) { j["embedder"] = "text-embedding-3"; }), ErrorKind::Config);
  EXPECT_EQ(bad([](json& j) { j["k_rows"] = 0; }), ErrorKind::Config);

  json live = base_config();
  live["mode"] = "live";
  live["endpoint_url"] = "http://127.0.0.1:1";
  live["roles"]["e2e"] = {{"model", "m"}, {"temperature", 0.2}, {"seed", 7}};
  auto cfg = config_from_json(live, bench_dir());
  EXPECT_NO_THROW(validate(cfg));
  EXPECT_EQ(cfg.roles.at("e2e").seed, 7);
}

TEST(Benchmark, ReplayMatchesDesignAndIsDeterministic) {
  std::ifstream in(bench_dir() / "design.json");
  json design = json::parse(in);
  auto first = replay_fixture();
  auto second = replay_fixture();
  EXPECT_EQ(first.report.total, design["total"].get<std::size_t>());
  EXPECT_EQ(first.report.correct, design["correct"].get<std::size_t>());
  EXPECT_EQ(traces_without_time(first.traces), traces_without_time(second.traces));

  auto stats = report_stats(first.traces);
  for (auto category : kAllDecisionCategories) {
    std::string name(to_string(category));
    EXPECT_EQ(stats.decisions.at(category), design["decisions"].value(name, std::size_t{0})) << name;
  }
  for (const auto& t : first.traces) {
    EXPECT_EQ(std::string(to_string(t.decision_category)), design["questions"][t.question_id]["decision"]) << t.question_id;
  }
}

TEST(Benchmark, CallBudgetPerQuestion) {
  for (const auto& t : replay_fixture().traces) {
    EXPECT_LE(t.exchanges.size(), 12u) << t.question_id;
    for (auto tag : {"sql_a", "sql_b", "script_a", "script_b"}) EXPECT_LE(t.completions_for(tag), 2u);
    EXPECT_LE(t.completions_for("e2e"), 1u);
    if (t.chosen_index) {
      ASSERT_LT(*t.chosen_index, t.candidates.size());
      EXPECT_EQ(t.final_answer, t.candidates[*t.chosen_index].result());
    } else {
      EXPECT_FALSE(t.final_answer);
    }
  }
}

TEST(Benchmark, RecordThenReplayGivesSameReport) {
  auto cfg = load_config(bench_dir() / "config.json");
  cfg.mode = CassetteMode::Record;
  cfg.cassette = temp_path("recorded.jsonl");
  cfg.endpoint_url = "http://unused.invalid";
  tabqa::testing::FixtureScript script(bench_dir(), cfg);
  auto recording = make_context(cfg, script.gateway());
  auto recorded = run_benchmark(bench_dir() / "tables", bench_dir() / "questions.jsonl", *recording);
  recording->flush();

  cfg.mode = CassetteMode::Replay;
  auto replaying = make_context(cfg);
  auto replayed = run_benchmark(bench_dir() / "tables", bench_dir() / "questions.jsonl", *replaying);
  EXPECT_EQ(eval::report_to_json(recorded.report), eval::report_to_json(replayed.report));
  EXPECT_EQ(traces_without_time(recorded.traces), traces_without_time(replayed.traces));
  fs::remove(cfg.cassette);
}

TEST(Benchmark, MissingTableFailsOnlyItsQuestion) {
  auto questions = temp_path("questions.jsonl");
  {
    std::ifstream src(bench_dir() / "questions.jsonl");
    std::string first;
    std::getline(src, first);
    std::ofstream out(questions);
    out << first << "\n";
    out << R"({"id": "x1", "dataset_id": "nowhere", "question": "Anything?", "expected_type": "boolean", "expected_answer": {"type": "boolean", "value": true}})"
        << "\n";
  }
  auto ctx = make_context(load_config(bench_dir() / "config.json"));
  auto out_dir = temp_path("bench-out");
  auto r = run_benchmark(bench_dir() / "tables", questions, *ctx, out_dir);
  ASSERT_EQ(r.traces.size(), 2u);
  EXPECT_FALSE(r.traces[0].error);
  ASSERT_TRUE(r.traces[1].error);
  EXPECT_EQ(r.traces[1].decision_category, DecisionCategory::NoValidCandidate);
  EXPECT_EQ(r.report.total, 2u);
  EXPECT_EQ(r.report.correct, 1u);
  for (auto f : {"traces.jsonl", "score_input.jsonl", "score.json", "score.txt"}) EXPECT_TRUE(fs::exists(out_dir / f)) << f;
  EXPECT_EQ(traces_without_time(load_traces(out_dir / "traces.jsonl")), traces_without_time(r.traces));
  fs::remove(questions);
  fs::remove_all(out_dir);
}

TEST(Stats, EmptyArchiveWarns) {
  auto s = report_stats({});
  EXPECT_EQ(s.traces, 0u);
  EXPECT_FALSE(s.warnings.empty());
  for (auto c : kAllDecisionCategories) EXPECT_EQ(s.decisions.at(c), 0u);
  EXPECT_NE(stats_to_text(s).find("warning"), std::string::npos);
}

TEST(Cli, AskAnswersOneQuestionInReplay) {
  int status = 0;
  std::string cmd = std::string(TABQA_CLI) + " ask -c " + (bench_dir() / "config.json").string() + " -t " +
                    (bench_dir() / "tables" / "employees.csv").string() +
                    " 'Is there any employee older than 45?' --type boolean 2>&1";
  std::string out = run_command(cmd, &status);
  EXPECT_EQ(status, 0) << out;
  EXPECT_NE(out.find("True"), std::string::npos) << out;

  run_command(std::string(TABQA_CLI) + " score /nonexistent.jsonl 2>&1", &status);
  EXPECT_NE(status, 0);
  auto bad = temp_path("bad-pairs.jsonl");
  std::ofstream(bad) << "{not json\n";
  std::string malformed = run_command(std::string(TABQA_CLI) + " score " + bad.string() + " 2>&1", &status);
  EXPECT_EQ(WEXITSTATUS(status), 2) << malformed;
  fs::remove(bad);
}
