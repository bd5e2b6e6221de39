#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xdalign/corpus.hpp"

namespace xdalign {

inline constexpr double kUnitNormTolerance = 1e-6;

// Id-indexed, row-major matrix of unit-normalized float vectors.
// Construction enforces the shape and norm invariants.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Takes rows that are already unit-normalized; throws IntegrityError on a
  // shape violation and NormalizationError on a row whose norm is off.
  EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim, std::vector<float> data);

  // Normalizes each row; a zero row raises NormalizationError naming its index.
  static EmbeddingMatrix normalized(std::vector<std::string> ids, std::size_t dim, std::vector<float> data);

  std::size_t rows() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<float>& data() const { return data_; }
  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  std::optional<std::size_t> index_of(const std::string& id) const;
  // Throws MissingVectorError naming the id.
  std::span<const float> vector_for(const std::string& id) const;

  bool operator==(const EmbeddingMatrix& other) const;

 private:
  std::vector<std::string> ids_;
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class ProviderMode { File, Remote };

struct ProviderConfig {
  ProviderMode mode = ProviderMode::File;
  std::string endpoint;  // remote: base URL, requests go to {endpoint}/embed
  std::string model_name;
  std::size_t batch_size = 32;
  std::string auth_token_env;  // env var holding the bearer token; empty = no auth
  std::size_t max_in_flight = 1;
  int timeout_seconds = 60;
  std::filesystem::path vectors_path;  // file mode: precomputed vectors keyed by unit id

  // Throws ValidationError when remote mode lacks an endpoint or batch_size is 0.
  void validate() const;
};

ProviderMode parse_provider_mode(std::string_view s);

struct TextUnit {
  std::string id;
  std::string text;
};

// Title and lead, each trimmed, joined by one space. Throws ValidationError
// when both are empty.
std::string build_alignment_text(const Document& doc);

// Batch encoder. Implementations must tolerate concurrent encode() calls.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  // Returns one raw (unnormalized) vector per unit, in order.
  virtual std::vector<std::vector<float>> encode(std::span<const TextUnit> batch) = 0;
};

// JSON-over-HTTP client: POST {endpoint}/embed {"model", "texts"} -> {"vectors"}.
class RemoteBackend : public EmbeddingBackend {
 public:
  explicit RemoteBackend(ProviderConfig config);
  std::vector<std::vector<float>> encode(std::span<const TextUnit> batch) override;

 private:
  ProviderConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::string token_;
};

// Looks vectors up by unit id in a precomputed vector file.
class FileBackend : public EmbeddingBackend {
 public:
  explicit FileBackend(EmbeddingMatrix vectors) : vectors_(std::move(vectors)) {}
  explicit FileBackend(const std::filesystem::path& path);
  std::vector<std::vector<float>> encode(std::span<const TextUnit> batch) override;

 private:
  EmbeddingMatrix vectors_;
};

std::unique_ptr<EmbeddingBackend> make_backend(const ProviderConfig& config);

// Embeds `units` in batches of at most `batch_size`, with up to
// `max_in_flight` batches outstanding. Output rows follow input order.
EmbeddingMatrix embed_texts(std::span<const TextUnit> units, EmbeddingBackend& backend, std::size_t batch_size,
                            std::size_t max_in_flight = 1);
EmbeddingMatrix embed_texts(std::span<const TextUnit> units, const ProviderConfig& config);

// One title+lead unit per document, id = document id.
std::vector<TextUnit> alignment_units(const std::vector<Document>& docs);

}  // namespace xdalign
