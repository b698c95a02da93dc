#include "tabqa/llm/extract.hpp"

#include <algorithm>
#include <vector>

#include "tabqa/error.hpp"

namespace tabqa::llm {

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

int default_marker_tolerance(std::string_view marker) noexcept {
  return std::max<int>(1, static_cast<int>(marker.size() / 10));
}

std::optional<std::size_t> find_marker_end(std::string_view completion, std::string_view marker,
                                           int max_edit_distance) {
  if (marker.empty()) return std::nullopt;
  const std::string text = to_lower_ascii(completion);
  const std::string pattern = to_lower_ascii(marker);
  const std::size_t m = pattern.size();

  // Approximate substring matching: the match may start anywhere in the text,
  // so row 0 stays at zero. dist[j] is the best distance of a match ending
  // right before text[j].
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t i = 0; i <= m; ++i) prev[i] = static_cast<int>(i);
  std::vector<int> dist(text.size() + 1, static_cast<int>(m));
  for (std::size_t j = 1; j <= text.size(); ++j) {
    cur[0] = 0;
    for (std::size_t i = 1; i <= m; ++i) {
      int substitute = prev[i - 1] + (text[j - 1] == pattern[i - 1] ? 0 : 1);
      cur[i] = std::min({substitute, prev[i] + 1, cur[i - 1] + 1});
    }
    dist[j] = cur[m];
    std::swap(prev, cur);
  }

  // The last run of consecutive acceptable end positions is the last
  // occurrence; inside it prefer the smallest distance, then the latest end.
  std::optional<std::size_t> best;
  for (std::size_t j = text.size(); j >= 1; --j) {
    if (dist[j] > max_edit_distance) {
      if (best) break;
      continue;
    }
    if (!best || dist[j] < dist[*best]) best = j;
  }
  return best;
}

std::optional<std::size_t> find_marker_end_tiered(std::string_view completion,
                                                  std::string_view marker,
                                                  int max_edit_distance) {
  for (int d = 0; d <= max_edit_distance; ++d) {
    if (auto end = find_marker_end(completion, marker, d)) return end;
  }
  return std::nullopt;
}

std::string extract_marked_section(std::string_view completion, std::string_view marker,
                                   std::optional<int> max_edit_distance) {
  int tolerance = max_edit_distance.value_or(default_marker_tolerance(marker));
  auto end = find_marker_end_tiered(completion, marker, tolerance);
  if (!end) {
    throw Error(ErrorKind::MarkerNotFound, "'" + std::string(marker) + "' not found");
  }
  return trim(completion.substr(*end));
}

namespace {

bool looks_like_language_hint(std::string_view line) {
  if (line.empty() || line.size() > 20) return false;
  return std::all_of(line.begin(), line.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '+' || c == '-' || c == '_';
  });
}

}  // namespace

std::string extract_code_block(std::string_view completion) {
  std::vector<std::size_t> fences;
  for (std::size_t pos = completion.find("```"); pos != std::string_view::npos;
       pos = completion.find("```", pos + 3)) {
    fences.push_back(pos);
  }
  if (fences.size() >= 2) {
    std::size_t pairs = fences.size() / 2;
    std::size_t open = fences[2 * (pairs - 1)] + 3;
    std::size_t close = fences[2 * (pairs - 1) + 1];
    std::string_view body = completion.substr(open, close - open);
    auto newline = body.find('\n');
    if (newline != std::string_view::npos && looks_like_language_hint(trim(body.substr(0, newline)))) {
      body = body.substr(newline + 1);
    }
    std::string code = trim(body);
    if (!code.empty()) return code;
  }
  auto end = find_marker_end_tiered(completion, "Code:", 1);
  if (end) {
    std::string code = trim(completion.substr(*end));
    if (!code.empty()) return code;
  }
  throw Error(ErrorKind::NoCodeFound, "no fenced block or 'Code:' marker in completion");
}

}  // namespace tabqa::llm
