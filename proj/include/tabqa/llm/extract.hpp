#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tabqa::llm {

/// One edit per ten marker characters, never less than one.
int default_marker_tolerance(std::string_view marker) noexcept;

/// Text following the last approximate occurrence of `marker`
/// (case-insensitive, at most `max_edit_distance` edits), trimmed. Closer
/// matches win: an exact occurrence anywhere beats a later one-edit match, so
/// prose like "my final answer" cannot shadow an earlier "Final Answer:".
/// Throws Error(MarkerNotFound).
std::string extract_marked_section(std::string_view completion, std::string_view marker,
                                   std::optional<int> max_edit_distance = std::nullopt);

/// Position just past the chosen approximate occurrence, or nullopt.
std::optional<std::size_t> find_marker_end(std::string_view completion,
                                           std::string_view marker, int max_edit_distance);

/// Smallest distance tier that matches at all, then find_marker_end in it.
std::optional<std::size_t> find_marker_end_tiered(std::string_view completion,
                                                  std::string_view marker, int max_edit_distance);

/// Content of the last complete ``` fence (language hint dropped), else the
/// text after the last fuzzy "Code:" marker. Throws Error(NoCodeFound).
std::string extract_code_block(std::string_view completion);

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

}  // namespace tabqa::llm
