#include "qirk/SemanticIndex.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>

#include "qirk/Http.h"

namespace qirk::index {

namespace {

constexpr char kMagic[8] = {'Q', 'I', 'R', 'K', 'I', 'D', 'X', '1'};
constexpr std::uint8_t kNoDatatype = 0xFF;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void put(T value) {
    static_assert(std::is_integral_v<T> || std::is_same_v<T, float>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(bytes, bytes + sizeof(T));
    }
    out_.write(reinterpret_cast<const char*>(bytes), sizeof(T));
  }
  void putString(std::string_view s) {
    put(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  template <typename T>
  T get() {
    unsigned char bytes[sizeof(T)];
    read(bytes, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(bytes, bytes + sizeof(T));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
  std::string getString() {
    auto n = get<std::uint32_t>();
    if (n > (1u << 24)) throw IndexFormatError("string length out of range");
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  void read(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw IndexFormatError("index file is truncated");
    }
  }

 private:
  std::istream& in_;
};

void normalize(Vector& v) {
  double norm = 0;
  for (float x : v) norm += static_cast<double>(x) * x;
  norm = std::sqrt(norm);
  if (norm == 0) {
    if (!v.empty()) v[0] = 1.0F;
    return;
  }
  for (float& x : v) x = static_cast<float>(x / norm);
}

}  // namespace

// _____________________________________________________________________________
std::vector<Vector> EmbeddingProvider::embedBatch(
    std::span<const std::string> texts) const {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Vector defaultEmbed(std::string_view text) {
  constexpr std::size_t kDim = TrigramEmbedding::kDimension;
  std::vector<double> counts(kDim, 0.0);
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char c : text) {
    if (std::ispunct(c)) {
      cleaned.push_back(' ');
    } else {
      cleaned.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  bool any = false;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && std::isspace(static_cast<unsigned char>(cleaned[i]))) ++i;
    std::size_t j = i;
    while (j < cleaned.size() && !std::isspace(static_cast<unsigned char>(cleaned[j]))) ++j;
    if (j > i) {
      std::string padded = "^" + cleaned.substr(i, j - i) + "$";
      for (std::size_t k = 0; k + 3 <= padded.size(); ++k) {
        counts[fnv1a64(std::string_view(padded).substr(k, 3)) % kDim] += 1;
        any = true;
      }
    }
    i = j;
  }
  Vector v(kDim, 0.0F);
  if (!any) {
    v[0] = 1.0F;
    return v;
  }
  double norm = 0;
  for (double c : counts) norm += c * c;
  norm = std::sqrt(norm);
  for (std::size_t k = 0; k < kDim; ++k) {
    v[k] = static_cast<float>(counts[k] / norm);
  }
  return v;
}

Vector TrigramEmbedding::embed(std::string_view text) const {
  return defaultEmbed(text);
}

// _____________________________________________________________________________
HttpEmbedding::HttpEmbedding(std::string url, std::size_t dimension,
                             std::chrono::milliseconds timeout,
                             std::size_t batchSize)
    : url_(std::move(url)),
      dimension_(dimension),
      timeout_(timeout),
      batchSize_(std::max<std::size_t>(1, batchSize)) {}

Vector HttpEmbedding::embed(std::string_view text) const {
  std::string t(text);
  return embedBatch(std::span<const std::string>(&t, 1)).front();
}

std::vector<Vector> HttpEmbedding::embedBatch(
    std::span<const std::string> texts) const {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += batchSize_) {
    auto chunk = texts.subspan(start, std::min(batchSize_, texts.size() - start));
    nlohmann::json body{{"texts", nlohmann::json::array()}};
    for (const auto& t : chunk) body["texts"].push_back(t);
    nlohmann::json reply;
    try {
      reply = http::postJson(url_, body, {}, timeout_);
    } catch (const std::exception& e) {
      throw ProviderFailure(std::string("embedding service: ") + e.what());
    }
    auto it = reply.find("vectors");
    if (it == reply.end() || !it->is_array() || it->size() != chunk.size()) {
      throw ProviderFailure("embedding service returned " +
                            std::string(it == reply.end() ? "no vectors" : "a wrong vector count"));
    }
    for (const auto& row : *it) {
      if (!row.is_array() || row.size() != dimension_) {
        throw ProviderFailure("embedding service returned a vector of dimension " +
                              std::to_string(row.is_array() ? row.size() : 0) +
                              ", expected " + std::to_string(dimension_));
      }
      Vector v;
      v.reserve(dimension_);
      for (const auto& x : row) {
        if (!x.is_number()) throw ProviderFailure("non-numeric vector component");
        v.push_back(x.get<float>());
      }
      normalize(v);
      out.push_back(std::move(v));
    }
  }
  return out;
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0;
  double na = 0;
  double nb = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string_view toString(Kind kind) {
  return kind == Kind::Entity ? "entity" : "property";
}

// _____________________________________________________________________________
SemanticIndex SemanticIndex::build(
    const kg::KgStore& store, std::shared_ptr<const EmbeddingProvider> provider) {
  SemanticIndex idx;
  idx.provider_ = std::move(provider);
  idx.dimension_ = idx.provider_->dimension();
  std::vector<std::string> texts;
  for (const auto& e : store.entities()) {
    idx.entries_.push_back({Kind::Entity, e.id, e.label, e.popularity, std::nullopt});
    texts.push_back(e.label + ". " + e.description);
  }
  for (const auto& p : store.properties()) {
    idx.entries_.push_back({Kind::Property, p.id, p.label, 0, p.datatype});
    texts.push_back(p.label + ". " + p.description);
  }
  std::vector<Vector> vectors;
  try {
    vectors = idx.provider_->embedBatch(texts);
  } catch (const ProviderFailure& e) {
    // Retry one by one to name the record that fails.
    for (std::size_t i = 0; i < texts.size(); ++i) {
      try {
        idx.provider_->embed(texts[i]);
      } catch (const std::exception& inner) {
        throw ProviderFailure(std::string(inner.what()) + " (while embedding " +
                                  idx.entries_[i].id + ")",
                              idx.entries_[i].id);
      }
    }
    throw;
  }
  if (vectors.size() != texts.size()) {
    throw ProviderFailure("provider returned " + std::to_string(vectors.size()) +
                          " vectors for " + std::to_string(texts.size()) + " texts");
  }
  idx.vectors_.reserve(texts.size() * idx.dimension_);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != idx.dimension_) {
      throw ProviderFailure("vector for " + idx.entries_[i].id + " has dimension " +
                                std::to_string(vectors[i].size()),
                            idx.entries_[i].id);
    }
    idx.vectors_.insert(idx.vectors_.end(), vectors[i].begin(), vectors[i].end());
  }
  return idx;
}

void SemanticIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw kg::IoError("cannot write index '" + path.string() + "'");
  out.write(kMagic, sizeof kMagic);
  Writer w(out);
  w.put(kFormatVersion);
  w.put(static_cast<std::uint32_t>(dimension_));
  w.put(static_cast<std::uint64_t>(entries_.size()));
  w.putString(provider_->name());
  for (const Entry& e : entries_) {
    w.put(static_cast<std::uint8_t>(e.kind));
    w.put(e.datatype ? static_cast<std::uint8_t>(*e.datatype) : kNoDatatype);
    w.put(e.popularity);
    w.putString(e.id);
    w.putString(e.label);
  }
  for (float x : vectors_) w.put(x);
  if (!out) throw kg::IoError("error writing index '" + path.string() + "'");
}

SemanticIndex SemanticIndex::load(
    const std::filesystem::path& path,
    std::shared_ptr<const EmbeddingProvider> provider) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kg::IoError("cannot open index '" + path.string() + "'");
  char magic[sizeof kMagic];
  Reader r(in);
  r.read(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IndexFormatError("'" + path.string() + "' is not a qirk index");
  }
  auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion) {
    throw IndexFormatError("unsupported index version " + std::to_string(version));
  }
  SemanticIndex idx;
  idx.dimension_ = r.get<std::uint32_t>();
  auto count = r.get<std::uint64_t>();
  auto providerName = r.getString();
  if (providerName != provider->name() || idx.dimension_ != provider->dimension()) {
    throw IndexFormatError("index was built with provider '" + providerName +
                           "' (dimension " + std::to_string(idx.dimension_) +
                           "), not '" + provider->name() + "'");
  }
  idx.provider_ = std::move(provider);
  for (std::uint64_t i = 0; i < count; ++i) {
    Entry e;
    auto kind = r.get<std::uint8_t>();
    if (kind > 1) throw IndexFormatError("bad entry kind");
    e.kind = static_cast<Kind>(kind);
    auto dt = r.get<std::uint8_t>();
    if (dt != kNoDatatype) {
      if (dt > static_cast<std::uint8_t>(kg::ValueType::Numeric)) {
        throw IndexFormatError("bad entry datatype");
      }
      e.datatype = static_cast<kg::ValueType>(dt);
    }
    e.popularity = r.get<std::uint64_t>();
    e.id = r.getString();
    e.label = r.getString();
    idx.entries_.push_back(std::move(e));
  }
  idx.vectors_.resize(count * idx.dimension_);
  for (float& x : idx.vectors_) x = r.get<float>();
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IndexFormatError("trailing bytes after index payload");
  }
  return idx;
}

std::size_t SemanticIndex::count(Kind kind) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [&](const Entry& e) { return e.kind == kind; }));
}

std::span<const float> SemanticIndex::vector(std::size_t row) const {
  return std::span<const float>(vectors_).subspan(row * dimension_, dimension_);
}

CandidateSet SemanticIndex::resolve(std::string_view keyword, Kind kind,
                                    std::size_t k,
                                    const ResolveOptions& options) const {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (count(kind) == 0) {
    throw EmptyIndex("index holds no " + std::string(toString(kind)) + " vectors");
  }
  Vector query = provider_->embed(keyword);
  struct Scored {
    double score;
    std::size_t row;
  };
  std::vector<Scored> scored;
  for (std::size_t row = 0; row < entries_.size(); ++row) {
    const Entry& e = entries_[row];
    if (e.kind != kind) continue;
    double s = cosine(query, vector(row));
    if (options.popularityBoost != 0) {
      s += options.popularityBoost * std::log1p(static_cast<double>(e.popularity));
    }
    if (s < options.scoreThreshold) continue;
    scored.push_back({s, row});
  }
  // Scores are ranked at 1e-6 resolution so that float noise between equal
  // texts falls through to the popularity and id tie-breaks.
  auto key = [](double s) { return std::llround(s * 1e6); };
  auto better = [&](const Scored& a, const Scored& b) {
    if (key(a.score) != key(b.score)) return key(a.score) > key(b.score);
    const Entry& ea = entries_[a.row];
    const Entry& eb = entries_[b.row];
    if (ea.popularity != eb.popularity) return ea.popularity > eb.popularity;
    return kg::compareIds(ea.id, eb.id) < 0;
  };
  std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), better);
  CandidateSet set;
  set.keyword = std::string(keyword);
  set.kind = kind;
  for (std::size_t i = 0; i < keep; ++i) {
    const Entry& e = entries_[scored[i].row];
    set.candidates.push_back({e.id, scored[i].score, e.label, e.datatype});
  }
  return set;
}

}  // namespace qirk::index
