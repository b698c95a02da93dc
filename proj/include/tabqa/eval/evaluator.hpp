#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabqa/answer.hpp"
#include "tabqa/decimal.hpp"

namespace tabqa::eval {

/// Drops digits past the second decimal place, toward zero.
Decimal truncate2(const Decimal& x);
/// Throws Error(NonFinite).
Decimal truncate2(double x);

/// Numbers compare after truncate2, categories and booleans exactly, lists
/// as multisets of their element rule. Different types never compare equal.
bool answers_equal(const TypedAnswer& expected, const TypedAnswer& got);

struct TypeTally {
  std::size_t total = 0;
  std::size_t correct = 0;
};

struct ScoreReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  bool empty = true;  // no pairs scored; accuracy is reported as 0
  std::map<AnswerType, TypeTally> per_type;
};

struct ScoredPair {
  std::string question_id;
  TypedAnswer expected;
  std::optional<TypedAnswer> got;
};

/// Missing answers count as incorrect; tallies are keyed by expected type.
ScoreReport score_run(const std::vector<ScoredPair>& pairs);

nlohmann::json report_to_json(const ScoreReport& report);
std::string report_to_text(const ScoreReport& report);

/// JSON-lines `{"question_id", "expected", "got"}` with `got` null when the
/// pipeline produced nothing.
std::string pair_to_json_line(const ScoredPair& pair);
std::vector<ScoredPair> load_pairs(const std::filesystem::path& path);

}  // namespace tabqa::eval
