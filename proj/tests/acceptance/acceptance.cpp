// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "tabqa/bench/benchmark.hpp"
#include "tabqa/bench/pipeline.hpp"
#include "tabqa/bench/stats.hpp"
#include "tabqa/eval/evaluator.hpp"
#include "tabqa/exact_json.hpp"
#include "tabqa/orchestrator/orchestrator.hpp"
#include "tabqa/retrieval/embedder.hpp"
#include "tabqa/retrieval/retrieval.hpp"
#include "tabqa/sql/engine.hpp"
#include "tabqa/table/columns.hpp"
#include "tabqa/table/sanitize.hpp"
#include "tabqa/table/table.hpp"

using namespace tabqa;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned sizes, seeds and limits.
constexpr std::size_t kComparisonPairs = 200;
constexpr double kComparisonLimitS = 5.0;
constexpr std::size_t kTruncationValues = 1000;
constexpr std::size_t kRetrievalTables = 50;
constexpr std::size_t kRetrievalMaxRows = 1000;
constexpr double kRetrievalLimitS = 30.0;
constexpr std::size_t kHeaderLists = 1000;
constexpr int kReplayRuns = 3;
constexpr double kReplayLimitS = 60.0;
constexpr std::size_t kFuzzedSelections = 500;
constexpr std::size_t kCompletionBudget = 2;
constexpr std::uint32_t kSeed = 20240521;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path bench_dir() { return fs::path(TABQA_FIXTURE_DIR) / "bench"; }

// ---------------------------------------------------------------- oracles

// Two-place truncation done on the decimal text.
std::string cut_two_places(const std::string& s) {
  std::string out = s;
  auto dot = out.find('.');
  if (dot != std::string::npos && out.size() > dot + 3) out.resize(dot + 3);
  return Decimal::parse(out).to_string();
}

std::vector<std::string> canonical_elements(const TypedAnswer& a) {
  std::vector<std::string> out;
  switch (a.type()) {
    case AnswerType::Boolean: out.push_back(a.as_boolean() ? "true" : "false"); break;
    case AnswerType::Number: out.push_back(cut_two_places(a.as_number().to_string())); break;
    case AnswerType::Category: out.push_back(a.as_category()); break;
    case AnswerType::ListCategory: out = a.as_list_category(); break;
    case AnswerType::ListNumber:
      for (const auto& d : a.as_list_number()) out.push_back(cut_two_places(d.to_string()));
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool oracle_equal(const TypedAnswer& x, const TypedAnswer& y) {
  return x.type() == y.type() && canonical_elements(x) == canonical_elements(y);
}

std::string random_decimal_text(std::mt19937& rng) {
  std::string s = rng() % 3 == 0 ? "-" : "";
  s += std::to_string(rng() % 100000);
  int frac = static_cast<int>(rng() % 7);
  if (frac) {
    s += ".";
    for (int i = 0; i < frac; ++i) s += static_cast<char>('0' + rng() % 10);
  }
  return s;
}

// Near-miss generator: pairs often differ only past the second decimal, by
// case, by order or by multiplicity.
TypedAnswer perturb(const TypedAnswer& a, std::mt19937& rng) {
  auto nudge = [&](const Decimal& d) {
    std::string s = d.to_string();
    if (s.find('.') == std::string::npos) s += ".";
    s += std::to_string(rng() % 10);
    return rng() % 2 ? Decimal::parse(s) : Decimal::parse(random_decimal_text(rng));
  };
  switch (a.type()) {
    case AnswerType::Boolean: return TypedAnswer::boolean(rng() % 2 ? a.as_boolean() : !a.as_boolean());
    case AnswerType::Number: return TypedAnswer::number(nudge(a.as_number()));
    case AnswerType::Category: {
      std::string c = a.as_category();
      if (rng() % 2 && !c.empty()) {
        unsigned char first = static_cast<unsigned char>(c[0]);
        c[0] = static_cast<char>(std::isupper(first) ? std::tolower(first) : std::toupper(first));
      }
      return TypedAnswer::category(c);
    }
    case AnswerType::ListCategory: {
      auto v = a.as_list_category();
      std::shuffle(v.begin(), v.end(), rng);
      if (rng() % 3 == 0 && !v.empty()) v.push_back(v.front());
      return TypedAnswer::list_category(v);
    }
    case AnswerType::ListNumber: {
      auto v = a.as_list_number();
      std::shuffle(v.begin(), v.end(), rng);
      if (rng() % 3 == 0 && !v.empty()) v.back() = nudge(v.back());
      return TypedAnswer::list_number(v);
    }
  }
  return a;
}

TypedAnswer random_answer(AnswerType type, std::mt19937& rng) {
  static const std::vector<std::string> cats = {"Manager", "manager", "HR", "IT", "Life Sciences", "Marketing", "Tree",
                                                "Stone", ""};
  std::size_t n = rng() % 5;
  switch (type) {
    case AnswerType::Boolean: return TypedAnswer::boolean(rng() % 2);
    case AnswerType::Number: return TypedAnswer::number(Decimal::parse(random_decimal_text(rng)));
    case AnswerType::Category: return TypedAnswer::category(cats[rng() % cats.size()]);
    case AnswerType::ListCategory: {
      std::vector<std::string> v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(cats[rng() % cats.size()]);
      return TypedAnswer::list_category(v);
    }
    case AnswerType::ListNumber: {
      std::vector<Decimal> v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(Decimal::parse(random_decimal_text(rng)));
      return TypedAnswer::list_number(v);
    }
  }
  return TypedAnswer::boolean(true);
}

// ---------------------------------------------------------------- criteria

Outcome comparison_oracle() {
  std::mt19937 rng(kSeed);
  auto start = Clock::now();
  std::size_t agree = 0, equal_pairs = 0;
  for (std::size_t i = 0; i < kComparisonPairs; ++i) {
    auto type = static_cast<AnswerType>(i % 5);
    TypedAnswer expected = random_answer(type, rng);
    TypedAnswer got = rng() % 10 == 0 ? random_answer(static_cast<AnswerType>(rng() % 5), rng) : perturb(expected, rng);
    bool want = oracle_equal(expected, got);
    equal_pairs += want;
    agree += eval::answers_equal(expected, got) == want;
  }
  double s = seconds_since(start);
  return {agree == kComparisonPairs && s < kComparisonLimitS,
          std::to_string(agree) + "/" + std::to_string(kComparisonPairs) + " agree (" + std::to_string(equal_pairs) +
              " equal pairs), " + fmt("%.3f", s) + " s, limit " + fmt("%.0f", kComparisonLimitS) + " s"};
}

Outcome truncation() {
  std::mt19937 rng(kSeed + 1);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < kTruncationValues; ++i) {
    std::string text = random_decimal_text(rng);
    if (i % 10 == 0) text = std::to_string(static_cast<int>(rng() % 1000) - 500) + "." + std::to_string(10 + rng() % 90);
    Decimal x = Decimal::parse(text);
    Decimal t = eval::truncate2(x);
    bool ok = eval::truncate2(t) == t && t.to_string() == cut_two_places(text) && t.fraction_digits() <= 2;
    // Toward zero: never moves away from zero, never by a full hundredth.
    double xd = x.to_double(), td = t.to_double();
    ok = ok && std::fabs(td) <= std::fabs(xd) + 1e-12 && std::fabs(xd - td) < 0.01 + 1e-9;
    if (x.fraction_digits() <= 2) ok = ok && t == x;
    failures += !ok;
  }
  return {failures == 0, std::to_string(failures) + " failures over " + std::to_string(kTruncationValues) + " values"};
}

double reference_cosine(const retrieval::EmbeddingVector& a, const retrieval::EmbeddingVector& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

Outcome retrieval_exactness() {
  std::mt19937 rng(kSeed + 2);
  const std::vector<std::string> words = {"Japan", "japan", "JAPAN", "Spain", "red", "blue", "10", "ten", "Ann",
                                          "Bob",   "x",     "",      "New York", "tokyo", "🌟", "café"};
  auto start = Clock::now();
  std::size_t mismatches = 0, ties = 0, rows_total = 0;
  retrieval::TrigramEmbedder embedder;
  for (std::size_t n = 0; n < kRetrievalTables; ++n) {
    std::size_t rows = 1 + rng() % kRetrievalMaxRows;
    std::size_t cols = 1 + rng() % 4;
    std::vector<std::vector<table::Cell>> rec(1);
    for (std::size_t c = 0; c < cols; ++c) rec[0].push_back("c" + std::to_string(c));
    for (std::size_t r = 0; r < rows; ++r) {
      if (r > 0 && rng() % 8 == 0) {
        rec.push_back(rec[1 + rng() % r]);  // duplicate row: exact tie
        continue;
      }
      std::vector<table::Cell> row;
      for (std::size_t c = 0; c < cols; ++c) {
        const std::string& w = words[rng() % words.size()];
        row.push_back(w.empty() ? table::Cell{} : table::Cell{w + (rng() % 2 ? "" : " " + words[rng() % words.size()])});
      }
      rec.push_back(row);
    }
    auto t = table::table_from_records("r" + std::to_string(n), rec);
    rows_total += t->row_count();
    Question q{"q", "customers from " + words[rng() % words.size()] + " " + words[rng() % words.size()], std::nullopt,
               t->dataset_id()};
    auto sel = table::all_columns(q, *t, "");
    std::size_t k = rng() % 2 ? 3 : 1 + rng() % (t->row_count() + 2);
    auto got = retrieval::top_k_rows(q, *t, sel, k, embedder);

    std::vector<std::size_t> all(t->column_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    auto qv = embedder.embed_one(q.text);
    std::vector<std::pair<double, std::size_t>> scan;
    for (std::size_t r = 0; r < t->row_count(); ++r) {
      scan.emplace_back(reference_cosine(qv, embedder.embed_one(retrieval::serialize_row(*t, all, r))), r);
    }
    std::stable_sort(scan.begin(), scan.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t want_n = std::min(k, scan.size());
    for (std::size_t i = 1; i < want_n; ++i) ties += scan[i].first == scan[i - 1].first;
    if (got.size() != want_n) {
      ++mismatches;
      continue;
    }
    for (std::size_t i = 0; i < want_n; ++i) {
      if (got[i].row_index != scan[i].second || got[i].score != scan[i].first) {
        ++mismatches;
        break;
      }
    }
  }
  double s = seconds_since(start);
  return {mismatches == 0 && s < kRetrievalLimitS,
          std::to_string(mismatches) + " mismatching tables of " + std::to_string(kRetrievalTables) + " (" +
              std::to_string(rows_total) + " rows, " + std::to_string(ties) + " exact ties in top-k), " +
              fmt("%.2f", s) + " s, limit " + fmt("%.0f", kRetrievalLimitS) + " s"};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string random_header(std::mt19937& rng) {
  static const std::vector<std::pair<char32_t, char32_t>> ranges = {
      {0x20, 0x7E},     {0x20, 0x20},     {0x41, 0x5A},   {0x61, 0x7A},   {0xC0, 0x17F},  {0x300, 0x36F},
      {0x400, 0x4FF},   {0x4E00, 0x4FFF}, {0x2600, 0x27BF}, {0x1F300, 0x1F6FF}, {0x1F900, 0x1F9FF}, {0x200D, 0x200D},
      {0xFE0F, 0xFE0F}, {0x1F1E6, 0x1F1FF}};
  std::string h;
  for (int n = static_cast<int>(rng() % 9); n > 0; --n) {
    auto [lo, hi] = ranges[rng() % ranges.size()];
    append_utf8(h, lo + static_cast<char32_t>(rng() % (hi - lo + 1)));
  }
  return h;
}

Outcome sanitization() {
  std::mt19937 rng(kSeed + 3);
  static const std::regex safe(R"([A-Za-z0-9_]([A-Za-z0-9_ ]*[A-Za-z0-9_])?)");
  std::size_t failures = 0, columns = 0;
  std::string first_failure;
  auto fail = [&](const std::string& why) {
    ++failures;
    if (first_failure.empty()) first_failure = why;
  };
  fs::path scratch = fs::temp_directory_path() / ("tabqa-acceptance-" + std::to_string(::getpid()) + ".csv");
  for (std::size_t n = 0; n < kHeaderLists; ++n) {
    std::vector<std::string> headers;
    for (std::size_t c = 1 + rng() % 10; c > 0; --c) {
      if (!headers.empty() && rng() % 5 == 0) {
        std::string dup = headers[rng() % headers.size()];
        if (rng() % 2) std::transform(dup.begin(), dup.end(), dup.begin(), ::toupper);
        headers.push_back(dup);
      } else {
        headers.push_back(random_header(rng));
      }
    }
    columns += headers.size();
    auto s = table::sanitize_columns(headers);
    std::set<std::string> folded;
    bool ok = s.names.size() == headers.size();
    for (std::size_t i = 0; ok && i < headers.size(); ++i) {
      std::string low = s.names[i];
      std::transform(low.begin(), low.end(), low.begin(), ::tolower);
      if (!folded.insert(low).second) fail("not injective: " + s.names[i]);
      if (!std::regex_match(s.names[i], safe)) fail("unsafe identifier: " + s.names[i]);
      if (s.map.restore(s.names[i]) != headers[i]) fail("restore mismatch for: " + headers[i]);
    }
    if (!ok) fail("length mismatch");

    // Every name must address its own column in SQLite and survive the CSV
    // snapshot handed to the script runner.
    std::vector<std::vector<table::Cell>> rec = {{}, {}};
    for (std::size_t i = 0; i < headers.size(); ++i) {
      rec[0].push_back(headers[i]);
      rec[1].push_back("v" + std::to_string(i));
    }
    auto t = table::table_from_records("h", rec);
    if (t->column_names() != s.names) fail("table names differ from sanitize_columns");
    sql::SqlEngine engine(*t);
    for (std::size_t i = 0; i < s.names.size(); ++i) {
      auto a = engine.execute("SELECT \"" + s.names[i] + "\" FROM temp_table");
      if (a.status != CandidateStatus::Ok || a.engine_result.rows.size() != 1 ||
          a.engine_result.rows[0][0] != sql::SqlValue(std::string("v" + std::to_string(i)))) {
        fail("SQL lookup failed for: " + s.names[i]);
      }
    }
    table::write_csv(*t, scratch);
    auto back = table::load_table(scratch, "h");
    if (back->column_names() != s.names) fail("CSV snapshot changed names");
  }
  fs::remove(scratch);
  return {failures == 0, std::to_string(failures) + " failures over " + std::to_string(kHeaderLists) + " header lists (" +
                             std::to_string(columns) + " headers)" + (first_failure.empty() ? "" : "; first: " + first_failure)};
}

std::string traces_without_time(const std::vector<PipelineTrace>& traces) {
  std::string out;
  for (const auto& t : traces) {
    nlohmann::json j = trace_to_json(t);
    j.erase("wall_time_ms");
    out += json_exact::dump(j) + "\n";
  }
  return out;
}

Outcome replay_determinism() {
  std::ifstream in(bench_dir() / "design.json");
  nlohmann::json design = nlohmann::json::parse(in);
  auto start = Clock::now();
  std::string reference;
  std::vector<std::string> problems;
  std::size_t correct = 0;
  std::map<std::string, std::size_t> histogram;
  for (int run = 0; run < kReplayRuns; ++run) {
    auto cfg = bench::load_config(bench_dir() / "config.json");
    if (cfg.mode != bench::CassetteMode::Replay || !cfg.sandbox_command.empty()) problems.push_back("fixture config is not replay-only");
    auto ctx = bench::make_context(cfg);
    auto r = bench::run_benchmark(bench_dir() / "tables", bench_dir() / "questions.jsonl", *ctx);
    std::string traces = traces_without_time(r.traces);
    if (run == 0) reference = traces;
    else if (traces != reference) problems.push_back("run " + std::to_string(run + 1) + " traces differ");
    correct = r.report.correct;
    if (r.report.total != design["total"].get<std::size_t>() || r.report.correct != design["correct"].get<std::size_t>()) {
      problems.push_back("accuracy " + std::to_string(r.report.correct) + "/" + std::to_string(r.report.total));
    }
    auto stats = bench::report_stats(r.traces);
    for (auto c : kAllDecisionCategories) {
      std::string name(to_string(c));
      histogram[name] = stats.decisions.at(c);
      if (stats.decisions.at(c) != design["decisions"].value(name, std::size_t{0})) {
        problems.push_back(name + " = " + std::to_string(stats.decisions.at(c)));
      }
    }
  }
  double s = seconds_since(start);
  if (s >= kReplayLimitS) problems.push_back("too slow");
  std::string hist;
  for (const auto& [k, v] : histogram) hist += (hist.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return {problems.empty(), std::to_string(correct) + "/" + std::to_string(design["total"].get<std::size_t>()) + " correct, " + hist + ", " +
                                std::to_string(kReplayRuns) + " runs identical=" + (problems.empty() ? "yes" : "no") +
                                ", " + fmt("%.2f", s) + " s, limit " + fmt("%.0f", kReplayLimitS) + " s" +
                                (problems.empty() ? "" : "; " + problems.front())};
}

Outcome orchestrator_safety() {
  std::mt19937 rng(kSeed + 4);
  auto t = table::table_from_records("o", {{table::Cell{"a"}}, {table::Cell{"1"}}});
  const std::vector<std::string> pieces = {"ANSWER:", "Answer", "ANSWR:", " ", "\n", "-1", "0", "1", "2", "3", "4", "5",
                                           "6", "18446744073709551617", "Solution Number", "REASONING:", "flaw", "é",
                                           "**", "2.5", "#3", "[1]", "none"};
  std::size_t violations = 0, fallbacks = 0;
  for (std::size_t i = 0; i < kFuzzedSelections; ++i) {
    std::vector<CandidateSolution> cs;
    bool any_ok = false;
    for (auto s : kAllStrategies) {
      if (rng() % 3 == 0) {
        cs.push_back(CandidateSolution::failed(s, "code", CandidateStatus::ExecError, "err", false));
      } else {
        cs.push_back(CandidateSolution::ok(s, "code", random_answer(static_cast<AnswerType>(rng() % 5), rng), false));
        any_ok = true;
      }
    }
    if (!any_ok) cs[rng() % cs.size()] = CandidateSolution::ok(Strategy::SqlA, "code", TypedAnswer::boolean(true), false);
    std::string out;
    if (i % 2) {
      out = "REASONING: pick one\nANSWER: " + std::to_string(static_cast<int>(rng() % 9) - 1);
    } else {
      for (int n = static_cast<int>(rng() % 10); n > 0; --n) out += pieces[rng() % pieces.size()];
    }
    int call = 0;
    auto gw = std::make_shared<llm::ScriptedGateway>([&](const llm::ChatRequest&) {
      return call++ == 0 ? std::string(rng() % 2 ? "ANSWER: number" : "no type") : out;
    });
    llm::ModelRole role{gw, "fuzz", std::nullopt, 0.0, 64};
    Question q{"q", "Which value?", std::nullopt, "o"};
    auto v = orchestrator::select(q, cs, *t, role);
    bool ok = v.chosen_index < cs.size() && cs[v.chosen_index].is_ok();
    if (ok) {
      TypedAnswer final_answer = *cs[v.chosen_index].result();
      bool presented = false;
      for (const auto& c : cs) presented = presented || (c.is_ok() && serialize_answer(*c.result()) == serialize_answer(final_answer));
      ok = presented;
    }
    std::size_t lowest_ok = 0;
    while (!cs[lowest_ok].is_ok()) ++lowest_ok;
    fallbacks += v.chosen_index == lowest_ok;
    violations += !ok;
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(kFuzzedSelections) +
                               " fuzzed selector outputs (" + std::to_string(fallbacks) + " resolved to lowest Ok)"};
}

Outcome correction_budget() {
  std::size_t over = 0, audited = 0, max_seen = 0;
  auto audit = [&](const std::vector<PipelineTrace>& traces) {
    for (const auto& t : traces) {
      for (auto tag : {"sql_a", "sql_b", "script_a", "script_b"}) {
        std::size_t n = t.completions_for(tag);
        max_seen = std::max(max_seen, n);
        over += n > kCompletionBudget;
        ++audited;
      }
    }
  };
  auto ctx = bench::make_context(bench::load_config(bench_dir() / "config.json"));
  audit(bench::run_benchmark(bench_dir() / "tables", bench_dir() / "questions.jsonl", *ctx).traces);

  // Adversarial pass: every completion is unusable and scripts reach a runner
  // that fails them, so every code candidate exhausts its correction round.
  auto cfg = bench::load_config(bench_dir() / "config.json");
  cfg.mode = bench::CassetteMode::Live;
  cfg.endpoint_url = "http://unused.invalid";
  cfg.sandbox_command = {TABQA_FAKE_SANDBOX};
  auto hostile = std::make_shared<llm::ScriptedGateway>([](const llm::ChatRequest&) {
    return std::string("```\nSELECT nope FROM temp_table; result = undefined_name\n```");
  });
  auto adversarial = bench::make_context(cfg, hostile);
  audit(bench::run_benchmark(bench_dir() / "tables", bench_dir() / "questions.jsonl", *adversarial).traces);
  return {over == 0, std::to_string(over) + " of " + std::to_string(audited) +
                         " code candidates over budget (max " + std::to_string(max_seen) + ", limit " +
                         std::to_string(kCompletionBudget) + ") across fixture and adversarial runs"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"comparison-oracle", comparison_oracle},     {"truncation", truncation},
      {"retrieval-exactness", retrieval_exactness}, {"sanitization", sanitization},
      {"replay-determinism", replay_determinism},   {"orchestrator-safety", orchestrator_safety},
      {"correction-budget", correction_budget},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %-20s %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
