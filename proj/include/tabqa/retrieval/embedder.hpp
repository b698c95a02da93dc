#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tabqa/llm/gateway.hpp"

namespace tabqa::retrieval {

using EmbeddingVector = std::vector<double>;

class Embedder {
 public:
  virtual ~Embedder() = default;
  /// One vector per input, all of dimension `dim()`.
  virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
  virtual std::size_t dim() const = 0;
  /// Distinguishes cache entries produced by different embedders.
  virtual std::string id() const = 0;
};

/// Deterministic, dependency-free embedder for tests and offline runs.
///
/// Text is split into words (runs of ASCII alphanumerics or non-ASCII code
/// points); every word is padded with one space on each side and cut into
/// code-point trigrams. Each trigram contributes weight 1 in lowercase form
/// and weight 0.5 in its original case, hashed (FNV-1a) into 256 buckets.
/// The result is L2-normalized. Text without any word maps to the zero
/// vector.
class TrigramEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDim = 256;
  static constexpr double kCaseWeight = 0.5;

  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  EmbeddingVector embed_one(const std::string& text) const;
  std::size_t dim() const override { return kDim; }
  std::string id() const override { return "trigram256"; }
};

/// OpenAI-compatible `POST {base}/v1/embeddings`.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(llm::Endpoint endpoint, std::string model);
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
  std::size_t dim() const override { return dim_; }
  std::string id() const override { return "http:" + model_; }

 private:
  llm::Endpoint endpoint_;
  std::string model_;
  std::size_t dim_ = 0;
};

/// Cosine similarity; 0 when either vector is all zeros.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace tabqa::retrieval
