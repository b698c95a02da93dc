#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tabqa/model.hpp"
#include "tabqa/retrieval/embedder.hpp"
#include "tabqa/table/columns.hpp"
#include "tabqa/table/table.hpp"

namespace tabqa::retrieval {

struct RowMatch {
  std::size_t row_index = 0;
  double score = 0.0;  // cosine similarity

  friend bool operator==(const RowMatch&, const RowMatch&) = default;
};

inline constexpr std::size_t kDefaultTopK = 3;

/// Row vectors keyed by (dataset id, selected column set, embedder id).
/// Many readers, exclusive population.
class EmbeddingCache {
 public:
  using Vectors = std::shared_ptr<const std::vector<EmbeddingVector>>;

  static std::string key(const std::string& dataset_id, const std::vector<std::string>& columns,
                         const std::string& embedder_id);

  Vectors get_or_compute(const std::string& key, const std::function<std::vector<EmbeddingVector>()>& compute);
  std::size_t size() const;

  /// JSON-lines: one `{"key": ..., "vectors": [[...], ...]}` record per key.
  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, Vectors> entries_;
};

/// `"col=value; col=value"` over the given columns (sanitized names).
std::string serialize_row(const table::TableHandle& t, const std::vector<std::size_t>& columns,
                          std::size_t row);

/// Ranks rows by cosine similarity to the question over the selected
/// columns. Returns min(k, rows) matches, scores non-increasing, ties broken
/// by ascending row index. Throws Error(Config) when k is zero.
std::vector<RowMatch> top_k_rows(const Question& q, const table::TableHandle& t,
                                 const table::ColumnSelection& sel, std::size_t k,
                                 Embedder& embedder, EmbeddingCache* cache = nullptr);

}  // namespace tabqa::retrieval
