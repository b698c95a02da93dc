#include "tabqa/retrieval/retrieval.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "tabqa/error.hpp"
#include "tabqa/table/render.hpp"

namespace tabqa::retrieval {

std::string EmbeddingCache::key(const std::string& dataset_id,
                                const std::vector<std::string>& columns,
                                const std::string& embedder_id) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& c : columns) {
    for (unsigned char ch : c) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    h ^= 0xff;  // separator
    h *= 1099511628211ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return dataset_id + "|" + hex + "|" + embedder_id;
}

EmbeddingCache::Vectors EmbeddingCache::get_or_compute(
    const std::string& key, const std::function<std::vector<EmbeddingVector>()>& compute) {
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  auto vectors = std::make_shared<const std::vector<EmbeddingVector>>(compute());
  entries_.emplace(key, vectors);
  return vectors;
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void EmbeddingCache::save(const std::filesystem::path& path) const {
  std::shared_lock lock(mutex_);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (const auto& [key, vectors] : entries_) {
    out << nlohmann::json{{"key", key}, {"vectors", *vectors}}.dump() << '\n';
  }
}

void EmbeddingCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot read " + path.string());
  std::unique_lock lock(mutex_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    entries_[j.at("key").get<std::string>()] =
        std::make_shared<const std::vector<EmbeddingVector>>(
            j.at("vectors").get<std::vector<EmbeddingVector>>());
  }
}

std::string serialize_row(const table::TableHandle& t, const std::vector<std::size_t>& columns,
                          std::size_t row) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += "; ";
    out += t.columns()[columns[i]].name + "=" + t.rows()[row][columns[i]].value_or("");
  }
  return out;
}

std::vector<RowMatch> top_k_rows(const Question& q, const table::TableHandle& t,
                                 const table::ColumnSelection& sel, std::size_t k,
                                 Embedder& embedder, EmbeddingCache* cache) {
  if (k == 0) throw Error(ErrorKind::Config, "k must be at least 1");
  auto columns = table::column_indices(t, sel.selected);
  if (columns.empty()) {
    for (std::size_t i = 0; i < t.column_count(); ++i) columns.push_back(i);
  }

  auto compute = [&] {
    std::vector<std::string> texts;
    texts.reserve(t.row_count());
    for (std::size_t r = 0; r < t.row_count(); ++r) texts.push_back(serialize_row(t, columns, r));
    auto vectors = embedder.embed(texts);
    if (vectors.size() != texts.size()) {
      throw Error(ErrorKind::DimMismatch, "embedder returned " + std::to_string(vectors.size()) +
                                              " vectors for " + std::to_string(texts.size()) + " rows");
    }
    return vectors;
  };
  std::shared_ptr<const std::vector<EmbeddingVector>> rows;
  if (cache) {
    std::vector<std::string> names;
    for (std::size_t c : columns) names.push_back(t.columns()[c].name);
    rows = cache->get_or_compute(EmbeddingCache::key(t.dataset_id(), names, embedder.id()), compute);
  } else {
    rows = std::make_shared<const std::vector<EmbeddingVector>>(compute());
  }

  auto query = embedder.embed({q.text});
  if (query.size() != 1) throw Error(ErrorKind::DimMismatch, "embedder returned no query vector");

  std::vector<RowMatch> scored;
  scored.reserve(rows->size());
  for (std::size_t r = 0; r < rows->size(); ++r) {
    scored.push_back({r, cosine(query.front(), (*rows)[r])});
  }
  std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(),
                    [](const RowMatch& a, const RowMatch& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.row_index < b.row_index;
                    });
  scored.resize(n);
  return scored;
}

}  // namespace tabqa::retrieval
