// Vector-similarity index over entity and property texts, used to resolve
// IR keywords to scored KG identifiers.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qirk/KgStore.h"

namespace qirk::index {

using Vector = std::vector<float>;

class ProviderFailure : public std::runtime_error {
 public:
  ProviderFailure(std::string message, std::string offendingId = {})
      : std::runtime_error(std::move(message)), id_(std::move(offendingId)) {}
  const std::string& offendingId() const { return id_; }

 private:
  std::string id_;
};

// Maps text to unit-length vectors of a fixed dimension. Implementations
// are deterministic and safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual Vector embed(std::string_view text) const = 0;
  virtual std::vector<Vector> embedBatch(std::span<const std::string> texts) const;
};

// Character-trigram hashing: lowercase, punctuation to spaces, trigrams of
// each `^token$`, FNV-1a 64 bucketed mod 256, counted and L2-normalized.
// Text without any token maps to (1, 0, ..., 0).
class TrigramEmbedding final : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDimension = 256;
  std::string name() const override { return "trigram-fnv1a-256"; }
  std::size_t dimension() const override { return kDimension; }
  Vector embed(std::string_view text) const override;
};

Vector defaultEmbed(std::string_view text);
std::uint64_t fnv1a64(std::string_view bytes);

// Embedding service reached over HTTP:
// POST {"texts":[...]} -> {"vectors":[[...], ...]}.
class HttpEmbedding final : public EmbeddingProvider {
 public:
  HttpEmbedding(std::string url, std::size_t dimension,
                std::chrono::milliseconds timeout = std::chrono::seconds(30),
                std::size_t batchSize = 64);
  std::string name() const override { return "http:" + url_; }
  std::size_t dimension() const override { return dimension_; }
  Vector embed(std::string_view text) const override;
  std::vector<Vector> embedBatch(std::span<const std::string> texts) const override;

 private:
  std::string url_;
  std::size_t dimension_;
  std::chrono::milliseconds timeout_;
  std::size_t batchSize_;
};

double cosine(std::span<const float> a, std::span<const float> b);

enum class Kind : std::uint8_t { Entity = 0, Property = 1 };
std::string_view toString(Kind kind);

struct Candidate {
  std::string id;
  double score = 0;
  std::string label;
  // Value datatype of property candidates.
  std::optional<kg::ValueType> datatype;
  bool operator==(const Candidate&) const = default;
};

struct CandidateSet {
  std::string keyword;
  Kind kind = Kind::Entity;
  std::vector<Candidate> candidates;
  bool operator==(const CandidateSet&) const = default;
};

class EmptyIndex : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IndexFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResolveOptions {
  // Candidates scoring below this are dropped.
  double scoreThreshold = 0.3;
  // score += popularityBoost * log1p(popularity)
  double popularityBoost = 0;
};

class SemanticIndex {
 public:
  struct Entry {
    Kind kind = Kind::Entity;
    std::string id;
    std::string label;
    std::uint64_t popularity = 0;
    std::optional<kg::ValueType> datatype;
    bool operator==(const Entry&) const = default;
  };

  static constexpr std::uint32_t kFormatVersion = 1;

  // Embeds `label + ". " + description` for every entity and property.
  static SemanticIndex build(const kg::KgStore& store,
                             std::shared_ptr<const EmbeddingProvider> provider);

  // Binary layout, little-endian: magic "QIRKIDX1", u32 version, u32
  // dimension, u64 count, u32 provider-name length + bytes; then per entry
  // u8 kind, u8 datatype (0xFF none), u64 popularity, u32-length-prefixed
  // id and label; then count*dimension float32 in row-major order.
  void save(const std::filesystem::path& path) const;
  static SemanticIndex load(const std::filesystem::path& path,
                            std::shared_ptr<const EmbeddingProvider> provider);

  // Top-k by cosine similarity, ties by popularity descending then id.
  CandidateSet resolve(std::string_view keyword, Kind kind, std::size_t k,
                       const ResolveOptions& options = {}) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::size_t count(Kind kind) const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::span<const float> vector(std::size_t row) const;
  const EmbeddingProvider& provider() const { return *provider_; }

 private:
  std::shared_ptr<const EmbeddingProvider> provider_;
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;
  std::vector<float> vectors_;
};

}  // namespace qirk::index
