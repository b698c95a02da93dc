#include "tabqa/llm/templates.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "tabqa/error.hpp"

namespace tabqa::llm {

namespace detail {
const std::map<std::string, std::string>& builtin_templates();
}

namespace {

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::string defuse(const std::string& value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    if (c == '{' && !out.empty() && out.back() == '{') out.push_back(' ');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string render_text(std::string_view text, const Bindings& bindings) {
  std::string out;
  out.reserve(text.size());
  std::vector<std::string> missing;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 2, "{{") == 0) {
      std::size_t j = i + 2;
      while (j < text.size() && is_key_char(text[j])) ++j;
      if (j > i + 2 && text.compare(j, 2, "}}") == 0) {
        std::string key(text.substr(i + 2, j - i - 2));
        auto it = bindings.find(key);
        if (it == bindings.end()) {
          if (std::find(missing.begin(), missing.end(), key) == missing.end()) {
            missing.push_back(key);
          }
        } else {
          out += defuse(it->second);
        }
        i = j + 2;
        continue;
      }
      // Not a placeholder; keep the braces but never emit them adjacent.
      out += "{ ";
      ++i;
      continue;
    }
    out.push_back(text[i++]);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw Error(ErrorKind::UnboundPlaceholder, names);
  }
  return out;
}

const TemplateStore& TemplateStore::builtin() {
  static const TemplateStore store = [] {
    TemplateStore s;
    for (const auto& [name, text] : detail::builtin_templates()) s.add(name, text);
    return s;
  }();
  return store;
}

TemplateStore TemplateStore::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::UnreadableFile, "template directory not found: " + dir.string());
  }
  TemplateStore store;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    store.add(entry.path().stem().string(), buf.str());
  }
  return store;
}

void TemplateStore::add(std::string name, std::string text) {
  templates_[std::move(name)] = std::move(text);
}

bool TemplateStore::contains(std::string_view name) const {
  return templates_.find(name) != templates_.end();
}

const std::string& TemplateStore::text(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(ErrorKind::UnknownTemplate, std::string(name));
  }
  return it->second;
}

std::string TemplateStore::render(std::string_view name, const Bindings& bindings) const {
  return render_text(text(name), bindings);
}

std::string render_template(std::string_view name, const Bindings& bindings) {
  return TemplateStore::builtin().render(name, bindings);
}

}  // namespace tabqa::llm
