#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tabqa::table {

/// Position-wise bijection between original and sanitized header names.
class SanitizationMap {
 public:
  SanitizationMap() = default;
  SanitizationMap(std::vector<std::string> originals, std::vector<std::string> sanitized);

  std::size_t size() const noexcept { return originals_.size(); }
  const std::vector<std::string>& originals() const noexcept { return originals_; }
  const std::vector<std::string>& sanitized() const noexcept { return sanitized_; }

  /// Original header for a sanitized name; empty string when unknown.
  std::string restore(std::string_view sanitized) const;
  std::vector<std::string> restore_all(const std::vector<std::string>& sanitized) const;
  /// Sanitized name of the first header equal to `original`.
  std::string sanitized_for(std::string_view original) const;
  /// Only the headers that actually changed.
  std::vector<std::pair<std::string, std::string>> changed() const;

 private:
  std::vector<std::string> originals_;
  std::vector<std::string> sanitized_;
};

struct SanitizedHeaders {
  std::vector<std::string> names;
  SanitizationMap map;
};

/// Stable 16-bit hash of a UTF-8 character cluster (FNV-1a folded to 16 bits).
std::uint16_t cluster_hash(std::string_view utf8_cluster) noexcept;

/// Replaces every character cluster outside `[A-Za-z0-9_ ]` with
/// `_hXXXX_` (lowercase hex of cluster_hash), trims outer spaces, names empty
/// headers `unnamed`, then makes names unique case-insensitively (SQLite
/// folds identifier case) by appending `_2`, `_3`, ... Total and
/// deterministic.
SanitizedHeaders sanitize_columns(const std::vector<std::string>& headers);

/// True when `name` is usable double-quoted in SQLite and as a dataframe
/// column key: non-empty, printable ASCII from `[A-Za-z0-9_ ]`, no outer
/// spaces.
bool is_safe_identifier(std::string_view name) noexcept;

}  // namespace tabqa::table
