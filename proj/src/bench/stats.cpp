#include "tabqa/bench/stats.hpp"

#include <cstdio>

namespace tabqa::bench {

StatsReport report_stats(const std::vector<PipelineTrace>& traces) {
  StatsReport s;
  for (auto c : kAllDecisionCategories) s.decisions[c] = 0;
  for (const auto& t : traces) {
    ++s.traces;
    ++s.decisions[t.decision_category];
    if (t.error) ++s.failed_questions;
    for (const auto& c : t.candidates) {
      ++s.candidate_status[{c.strategy(), c.status()}];
      if (c.corrected()) ++s.corrected;
    }
  }
  if (traces.empty()) s.warnings.push_back("trace archive is empty");
  return s;
}

namespace {

double percent(std::size_t n, std::size_t total) {
  return total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0;
}

}  // namespace

nlohmann::json stats_to_json(const StatsReport& s) {
  nlohmann::json decisions = nlohmann::json::object();
  for (const auto& [cat, n] : s.decisions) {
    decisions[std::string(to_string(cat))] = {{"count", n}, {"percent", percent(n, s.traces)}};
  }
  nlohmann::json statuses = nlohmann::json::object();
  for (const auto& [key, n] : s.candidate_status) {
    statuses[std::string(to_string(key.first))][std::string(to_string(key.second))] = n;
  }
  return {{"traces", s.traces},         {"decisions", decisions},
          {"candidate_status", statuses}, {"corrected", s.corrected},
          {"failed_questions", s.failed_questions}, {"warnings", s.warnings}};
}

std::string stats_to_text(const StatsReport& s) {
  std::string out;
  char line[160];
  for (const auto& w : s.warnings) out += "warning: " + w + "\n";
  std::snprintf(line, sizeof line, "%-20s %6s %8s\n", "decision", "count", "percent");
  out += line;
  for (const auto& [cat, n] : s.decisions) {
    std::snprintf(line, sizeof line, "%-20s %6zu %7.1f%%\n", std::string(to_string(cat)).c_str(), n,
                  percent(n, s.traces));
    out += line;
  }
  out += "\n";
  std::snprintf(line, sizeof line, "%-10s %-18s %6s\n", "strategy", "status", "count");
  out += line;
  for (const auto& [key, n] : s.candidate_status) {
    std::snprintf(line, sizeof line, "%-10s %-18s %6zu\n", std::string(to_string(key.first)).c_str(),
                  std::string(to_string(key.second)).c_str(), n);
    out += line;
  }
  std::snprintf(line, sizeof line, "\ntraces: %zu  corrected candidates: %zu  failed questions: %zu\n", s.traces,
                s.corrected, s.failed_questions);
  out += line;
  return out;
}

}  // namespace tabqa::bench
