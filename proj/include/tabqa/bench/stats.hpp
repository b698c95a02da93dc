#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tabqa/model.hpp"

namespace tabqa::bench {

struct StatsReport {
  std::size_t traces = 0;
  std::map<DecisionCategory, std::size_t> decisions;  // every category present, possibly zero
  std::map<std::pair<Strategy, CandidateStatus>, std::size_t> candidate_status;
  std::size_t corrected = 0;  // candidates that went through self-correction
  std::size_t failed_questions = 0;  // traces with an error before orchestration
  std::vector<std::string> warnings;
};

StatsReport report_stats(const std::vector<PipelineTrace>& traces);
nlohmann::json stats_to_json(const StatsReport& stats);
std::string stats_to_text(const StatsReport& stats);

}  // namespace tabqa::bench
