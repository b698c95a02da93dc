#include "tabqa/table/sanitize.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace tabqa::table {

namespace {

bool is_allowed(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') ||
         cp == '_' || cp == ' ';
}

// Decodes one code point; malformed bytes decode as themselves (one byte).
char32_t decode(std::string_view s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || i + len > s.size()) {
    ++i;
    return 0xDC00 + b0;
  }
  char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
  for (int k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xDC00 + b0;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

// Code points that attach to the preceding one inside an emoji or
// accented-letter cluster.
bool is_extender(char32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036F) ||    // combining diacritics
         (cp >= 0xFE00 && cp <= 0xFE0F) ||    // variation selectors
         (cp >= 0x1F3FB && cp <= 0x1F3FF) ||  // skin tone modifiers
         cp == 0x20E3 ||                      // combining keycap
         (cp >= 0xE0020 && cp <= 0xE007F);    // tag sequences
}

bool is_regional_indicator(char32_t cp) { return cp >= 0x1F1E6 && cp <= 0x1F1FF; }

struct Cluster {
  std::string_view bytes;
  bool allowed;
};

std::vector<Cluster> split_clusters(std::string_view s) {
  std::vector<Cluster> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t start = i;
    char32_t first = decode(s, i);
    bool pair_open = is_regional_indicator(first);
    while (i < s.size()) {
      std::size_t probe = i;
      char32_t next = decode(s, probe);
      if (is_extender(next)) {
        i = probe;
      } else if (next == 0x200D && probe < s.size()) {  // zero width joiner
        decode(s, probe);
        i = probe;
      } else if (pair_open && is_regional_indicator(next)) {
        pair_open = false;
        i = probe;
      } else {
        break;
      }
    }
    out.push_back({s.substr(start, i - start), i - start == 1 && is_allowed(first)});
  }
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::string trim_spaces(const std::string& s) {
  auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(' ');
  return s.substr(b, e - b + 1);
}

}  // namespace

SanitizationMap::SanitizationMap(std::vector<std::string> originals,
                                 std::vector<std::string> sanitized)
    : originals_(std::move(originals)), sanitized_(std::move(sanitized)) {}

std::string SanitizationMap::restore(std::string_view sanitized) const {
  for (std::size_t i = 0; i < sanitized_.size(); ++i) {
    if (sanitized_[i] == sanitized) return originals_[i];
  }
  return {};
}

std::vector<std::string> SanitizationMap::restore_all(
    const std::vector<std::string>& sanitized) const {
  std::vector<std::string> out;
  out.reserve(sanitized.size());
  for (const auto& s : sanitized) out.push_back(restore(s));
  return out;
}

std::string SanitizationMap::sanitized_for(std::string_view original) const {
  for (std::size_t i = 0; i < originals_.size(); ++i) {
    if (originals_[i] == original) return sanitized_[i];
  }
  return {};
}

std::vector<std::pair<std::string, std::string>> SanitizationMap::changed() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < originals_.size(); ++i) {
    if (originals_[i] != sanitized_[i]) out.emplace_back(originals_[i], sanitized_[i]);
  }
  return out;
}

std::uint16_t cluster_hash(std::string_view utf8_cluster) noexcept {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : utf8_cluster) {
    h ^= c;
    h *= 16777619u;
  }
  return static_cast<std::uint16_t>((h >> 16) ^ (h & 0xFFFFu));
}

SanitizedHeaders sanitize_columns(const std::vector<std::string>& headers) {
  std::vector<std::string> names;
  names.reserve(headers.size());
  std::set<std::string> used;  // lowercase
  for (const auto& header : headers) {
    std::string base;
    for (const Cluster& c : split_clusters(header)) {
      if (c.allowed) {
        base.append(c.bytes);
      } else {
        char token[8];
        std::snprintf(token, sizeof token, "%04x", cluster_hash(c.bytes));
        base += "_h";
        base += token;
        base += '_';
      }
    }
    base = trim_spaces(base);
    if (base.empty()) base = "unnamed";
    std::string name = base;
    for (int suffix = 2; used.count(lower(name)); ++suffix) {
      name = base + "_" + std::to_string(suffix);
    }
    used.insert(lower(name));
    names.push_back(std::move(name));
  }
  return {names, SanitizationMap(headers, names)};
}

bool is_safe_identifier(std::string_view name) noexcept {
  if (name.empty() || name.front() == ' ' || name.back() == ' ') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return is_allowed(static_cast<unsigned char>(c));
  });
}

}  // namespace tabqa::table
