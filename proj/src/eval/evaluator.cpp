#include "tabqa/eval/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "tabqa/error.hpp"
#include "tabqa/exact_json.hpp"

namespace tabqa::eval {

Decimal truncate2(const Decimal& x) { return x.truncated(2); }

Decimal truncate2(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "cannot truncate a non-finite number");
  return Decimal::from_double(x).truncated(2);
}

namespace {

template <typename T, typename Key>
bool same_multiset(const std::vector<T>& a, const std::vector<T>& b, Key key) {
  if (a.size() != b.size()) return false;
  using K = decltype(key(a.front()));
  std::vector<K> ka, kb;
  ka.reserve(a.size());
  kb.reserve(b.size());
  for (const auto& x : a) ka.push_back(key(x));
  for (const auto& x : b) kb.push_back(key(x));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace

bool answers_equal(const TypedAnswer& expected, const TypedAnswer& got) {
  if (expected.type() != got.type()) return false;
  switch (expected.type()) {
    case AnswerType::Boolean: return expected.as_boolean() == got.as_boolean();
    case AnswerType::Number: return truncate2(expected.as_number()) == truncate2(got.as_number());
    case AnswerType::Category: return expected.as_category() == got.as_category();
    case AnswerType::ListCategory:
      return same_multiset(expected.as_list_category(), got.as_list_category(),
                           [](const std::string& s) { return s; });
    case AnswerType::ListNumber:
      return same_multiset(expected.as_list_number(), got.as_list_number(),
                           [](const Decimal& d) { return truncate2(d); });
  }
  return false;
}

ScoreReport score_run(const std::vector<ScoredPair>& pairs) {
  ScoreReport report;
  for (const auto& p : pairs) {
    bool ok = p.got && answers_equal(p.expected, *p.got);
    ++report.total;
    auto& tally = report.per_type[p.expected.type()];
    ++tally.total;
    if (ok) {
      ++report.correct;
      ++tally.correct;
    }
  }
  report.empty = report.total == 0;
  report.accuracy = report.empty ? 0.0 : static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

nlohmann::json report_to_json(const ScoreReport& report) {
  nlohmann::json per_type = nlohmann::json::object();
  for (const auto& [type, tally] : report.per_type) {
    per_type[std::string(to_string(type))] = {{"total", tally.total}, {"correct", tally.correct}};
  }
  return {{"total", report.total},
          {"correct", report.correct},
          {"accuracy", report.accuracy},
          {"empty", report.empty},
          {"per_type", per_type}};
}

std::string report_to_text(const ScoreReport& report) {
  char line[128];
  std::string out;
  std::snprintf(line, sizeof line, "%-16s %7s %7s %9s\n", "type", "correct", "total", "accuracy");
  out += line;
  auto row = [&](const std::string& name, std::size_t correct, std::size_t total) {
    double acc = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    std::snprintf(line, sizeof line, "%-16s %7zu %7zu %9.4f\n", name.c_str(), correct, total, acc);
    out += line;
  };
  for (const auto& [type, tally] : report.per_type) row(std::string(to_string(type)), tally.correct, tally.total);
  row("all", report.correct, report.total);
  if (report.empty) out += "warning: no questions were scored\n";
  return out;
}

std::string pair_to_json_line(const ScoredPair& pair) {
  nlohmann::json j = {{"question_id", pair.question_id},
                      {"expected", answer_to_json(pair.expected)},
                      {"got", pair.got ? answer_to_json(*pair.got) : nlohmann::json(nullptr)}};
  return json_exact::dump(j);
}

std::vector<ScoredPair> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::vector<ScoredPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = json_exact::parse(line);
      ScoredPair p{j.at("question_id").get<std::string>(), answer_from_json(j.at("expected")), std::nullopt};
      if (j.contains("got") && !j["got"].is_null()) p.got = answer_from_json(j["got"]);
      pairs.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::MalformedAnswer, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pairs;
}

}  // namespace tabqa::eval
