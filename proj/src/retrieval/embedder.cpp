#include "tabqa/retrieval/embedder.hpp"

#include <cmath>

#include <json.hpp>

#include "../llm/http_client.hpp"
#include "tabqa/error.hpp"

namespace tabqa::retrieval {

namespace {

std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

bool is_word_byte(unsigned char c) {
  return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Splits a padded word into UTF-8 code point slices.
std::vector<std::string_view> code_points(std::string_view word) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t j = i + 1;
    while (j < word.size() && (static_cast<unsigned char>(word[j]) & 0xC0) == 0x80) ++j;
    out.push_back(word.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

EmbeddingVector TrigramEmbedder::embed_one(const std::string& text) const {
  EmbeddingVector v(kDim, 0.0);
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
    std::string padded = " " + text.substr(i, j - i) + " ";
    i = j;
    auto cps = code_points(padded);
    for (std::size_t k = 0; k + 3 <= cps.size(); ++k) {
      std::string gram;
      for (std::size_t m = 0; m < 3; ++m) gram.append(cps[k + m]);
      v[fnv1a("l:" + lower_ascii(gram)) % kDim] += 1.0;
      v[fnv1a("c:" + gram) % kDim] += kCaseWeight;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

std::vector<EmbeddingVector> TrigramEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

HttpEmbedder::HttpEmbedder(llm::Endpoint endpoint, std::string model)
    : endpoint_(std::move(endpoint)), model_(std::move(model)) {}

std::vector<EmbeddingVector> HttpEmbedder::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  nlohmann::json reply =
      llm::detail::post_json(endpoint_, "/v1/embeddings", {{"model", model_}, {"input", texts}});
  std::vector<EmbeddingVector> out(texts.size());
  try {
    for (const auto& item : reply.at("data")) {
      std::size_t index = item.value("index", std::size_t{0});
      if (index >= out.size()) throw Error(ErrorKind::DimMismatch, "embedding index out of range");
      out[index] = item.at("embedding").get<EmbeddingVector>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("unexpected embeddings payload: ") + e.what());
  }
  for (const auto& v : out) {
    if (v.empty()) throw Error(ErrorKind::DimMismatch, "missing embedding in reply");
    if (dim_ == 0) dim_ = v.size();
    if (v.size() != dim_) {
      throw Error(ErrorKind::DimMismatch, "expected dimension " + std::to_string(dim_) + ", got " +
                                              std::to_string(v.size()));
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "non-finite embedding entry");
    }
  }
  return out;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace tabqa::retrieval
