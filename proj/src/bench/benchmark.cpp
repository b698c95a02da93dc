#include "tabqa/bench/benchmark.hpp"

#include <fstream>
#include <map>

#include "tabqa/error.hpp"
#include "tabqa/exact_json.hpp"

namespace tabqa::bench {

namespace fs = std::filesystem;

std::vector<BenchmarkQuestion> load_questions(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::vector<BenchmarkQuestion> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = json_exact::parse(line);
      BenchmarkQuestion bq;
      bq.question.id = j.at("id").get<std::string>();
      bq.question.dataset_id = j.at("dataset_id").get<std::string>();
      bq.question.text = j.at("question").get<std::string>();
      if (j.contains("expected_type") && !j["expected_type"].is_null()) {
        auto tag = j["expected_type"].get<std::string>();
        bq.question.expected_type = answer_type_from_string(tag);
        if (!bq.question.expected_type) throw Error(ErrorKind::MalformedAnswer, "unknown expected_type '" + tag + "'");
      }
      if (j.contains("expected_answer") && !j["expected_answer"].is_null()) {
        bq.expected = answer_from_json(j["expected_answer"]);
        if (bq.question.expected_type && *bq.question.expected_type != bq.expected->type()) {
          throw Error(ErrorKind::MalformedAnswer, "expected_answer does not have expected_type");
        }
      }
      out.push_back(std::move(bq));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::MalformedAnswer, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::optional<fs::path> find_table(const fs::path& dataset_dir, const std::string& dataset_id) {
  for (fs::path p : {dataset_dir / (dataset_id + ".csv"), dataset_dir / dataset_id / "all.csv"}) {
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

void write_traces(const std::vector<PipelineTrace>& traces, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (const auto& t : traces) out << json_exact::dump(trace_to_json(t)) << '\n';
}

std::vector<PipelineTrace> load_traces(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::vector<PipelineTrace> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(trace_from_json(json_exact::parse(line)));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

BenchmarkResult run_benchmark(const fs::path& dataset_dir, const fs::path& questions_file, PipelineContext& ctx,
                              const fs::path& output_dir) {
  BenchmarkResult result;
  std::map<std::string, table::TablePtr> tables;
  std::map<std::string, std::string> table_errors;
  for (const auto& bq : load_questions(questions_file)) {
    const Question& q = bq.question;
    PipelineTrace trace;
    if (!tables.count(q.dataset_id) && !table_errors.count(q.dataset_id)) {
      try {
        auto path = find_table(dataset_dir, q.dataset_id);
        if (!path) throw Error(ErrorKind::UnreadableFile, "no table for dataset '" + q.dataset_id + "'");
        tables[q.dataset_id] = table::load_table(*path, q.dataset_id);
      } catch (const std::exception& e) {
        table_errors[q.dataset_id] = e.what();
      }
    }
    if (auto it = tables.find(q.dataset_id); it != tables.end()) {
      trace = run_question(q, *it->second, ctx);
    } else {
      trace.question_id = q.id;
      trace.error = table_errors[q.dataset_id];
      trace.decision_category = DecisionCategory::NoValidCandidate;
    }
    if (bq.expected) result.pairs.push_back({q.id, *bq.expected, trace.final_answer});
    result.traces.push_back(std::move(trace));
  }
  result.report = eval::score_run(result.pairs);
  ctx.flush();

  if (!output_dir.empty()) {
    fs::create_directories(output_dir);
    write_traces(result.traces, output_dir / "traces.jsonl");
    std::ofstream pairs(output_dir / "score_input.jsonl", std::ios::binary);
    for (const auto& p : result.pairs) pairs << eval::pair_to_json_line(p) << '\n';
    std::ofstream(output_dir / "score.json", std::ios::binary) << eval::report_to_json(result.report).dump(2) << '\n';
    std::ofstream(output_dir / "score.txt", std::ios::binary) << eval::report_to_text(result.report);
  }
  return result;
}

}  // namespace tabqa::bench
