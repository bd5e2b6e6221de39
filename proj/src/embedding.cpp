#include "xdalign/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <future>

#include <httplib.h>
#include <json.hpp>

#include "xdalign/error.hpp"
#include "xdalign/text.hpp"
#include "xdalign/vector_store.hpp"

namespace xdalign {

namespace {

double row_norm(std::span<const float> row) {
  double sum = 0.0;
  for (const float x : row) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim, std::vector<float> data)
    : ids_(std::move(ids)), dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw IntegrityError("embedding dimension must be positive");
  if (data_.size() != ids_.size() * dim_)
    throw IntegrityError("embedding data holds " + std::to_string(data_.size()) + " floats, expected " +
                         std::to_string(ids_.size()) + " x " + std::to_string(dim_));
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) throw IntegrityError("duplicate embedding id: " + ids_[i]);
    const double n = row_norm(row(i));
    if (!(std::abs(n - 1.0) <= kUnitNormTolerance))
      throw NormalizationError("row " + std::to_string(i) + " (" + ids_[i] + ") has norm " + std::to_string(n));
  }
}

EmbeddingMatrix EmbeddingMatrix::normalized(std::vector<std::string> ids, std::size_t dim, std::vector<float> data) {
  if (dim == 0 || data.size() != ids.size() * dim) throw IntegrityError("embedding shape mismatch");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::span<float> r(data.data() + i * dim, dim);
    const double n = row_norm(r);
    if (n == 0.0 || !std::isfinite(n))
      throw NormalizationError("cannot normalize vector for text index " + std::to_string(i) +
                               (n == 0.0 ? ": zero vector" : ": non-finite values"));
    for (float& x : r) x = static_cast<float>(x / n);
  }
  return EmbeddingMatrix(std::move(ids), dim, std::move(data));
}

std::optional<std::size_t> EmbeddingMatrix::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingMatrix::vector_for(const std::string& id) const {
  const auto i = index_of(id);
  if (!i) throw MissingVectorError("no vector for id " + id);
  return row(*i);
}

bool EmbeddingMatrix::operator==(const EmbeddingMatrix& other) const {
  if (ids_ != other.ids_ || dim_ != other.dim_ || data_.size() != other.data_.size()) return false;
  // Bitwise, so that -0.0 and NaN payloads are compared exactly.
  return std::equal(data_.begin(), data_.end(), other.data_.begin(),
                    [](float a, float b) { return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b); });
}

void ProviderConfig::validate() const {
  if (batch_size == 0) throw ValidationError("batch_size must be >= 1");
  if (max_in_flight == 0) throw ValidationError("max_in_flight must be >= 1");
  if (mode == ProviderMode::Remote && endpoint.empty()) throw ValidationError("remote provider requires an endpoint");
  if (mode == ProviderMode::File && vectors_path.empty()) throw ValidationError("file provider requires a vectors path");
}

ProviderMode parse_provider_mode(std::string_view s) {
  if (s == "file") return ProviderMode::File;
  if (s == "remote") return ProviderMode::Remote;
  throw ValidationError("unknown provider mode: " + std::string(s));
}

std::string build_alignment_text(const Document& doc) {
  const auto title = text::trim(doc.title);
  const auto lead = text::trim(doc.lead);
  if (title.empty() && lead.empty()) throw ValidationError("document " + doc.id + " has neither title nor lead");
  if (lead.empty()) return std::string(title);
  if (title.empty()) return std::string(lead);
  std::string out;
  out.reserve(title.size() + 1 + lead.size());
  out.append(title).append(" ").append(lead);
  return out;
}

std::vector<TextUnit> alignment_units(const std::vector<Document>& docs) {
  std::vector<TextUnit> units;
  units.reserve(docs.size());
  for (const auto& d : docs) units.push_back({d.id, build_alignment_text(d)});
  return units;
}

RemoteBackend::RemoteBackend(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.mode != ProviderMode::Remote) throw ValidationError("RemoteBackend needs a remote provider config");
  const auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("endpoint must be an http(s) URL: " + config_.endpoint);
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = config_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : config_.endpoint.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/embed";
  if (!config_.auth_token_env.empty()) {
    const char* token = std::getenv(config_.auth_token_env.c_str());
    if (!token || !*token) throw ProviderError("environment variable " + config_.auth_token_env + " is not set");
    token_ = token;
  }
}

std::vector<std::vector<float>> RemoteBackend::encode(std::span<const TextUnit> batch) {
  nlohmann::json body;
  body["model"] = config_.model_name;
  body["texts"] = nlohmann::json::array();
  for (const auto& u : batch) body["texts"].push_back(u.text);

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
  const auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw ProviderError("request to " + scheme_host_port_ + path_ + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw ProviderError("embedding service returned status " + std::to_string(res->status) + ": " +
                        res->body.substr(0, 200));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProviderError(std::string("embedding service returned invalid JSON: ") + e.what());
  }
  if (!reply.contains("vectors") || !reply["vectors"].is_array())
    throw ProviderError("embedding service reply lacks a \"vectors\" array");
  std::vector<std::vector<float>> out;
  out.reserve(batch.size());
  for (const auto& v : reply["vectors"]) {
    if (!v.is_array()) throw ProviderError("embedding service returned a non-array vector");
    out.push_back(v.get<std::vector<float>>());
  }
  return out;
}

FileBackend::FileBackend(const std::filesystem::path& path) : vectors_(load_vectors(path)) {}

std::vector<std::vector<float>> FileBackend::encode(std::span<const TextUnit> batch) {
  std::vector<std::vector<float>> out;
  out.reserve(batch.size());
  for (const auto& u : batch) {
    const auto v = vectors_.vector_for(u.id);
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

std::unique_ptr<EmbeddingBackend> make_backend(const ProviderConfig& config) {
  config.validate();
  if (config.mode == ProviderMode::Remote) return std::make_unique<RemoteBackend>(config);
  return std::make_unique<FileBackend>(config.vectors_path);
}

EmbeddingMatrix embed_texts(std::span<const TextUnit> units, EmbeddingBackend& backend, std::size_t batch_size,
                            std::size_t max_in_flight) {
  if (units.empty()) throw ValidationError("nothing to embed");
  if (batch_size == 0) throw ValidationError("batch_size must be >= 1");
  max_in_flight = std::max<std::size_t>(1, max_in_flight);

  const std::size_t n_batches = (units.size() + batch_size - 1) / batch_size;
  std::vector<std::vector<std::vector<float>>> results(n_batches);
  auto run_batch = [&](std::size_t b) {
    const std::size_t begin = b * batch_size;
    const std::size_t len = std::min(batch_size, units.size() - begin);
    auto vectors = backend.encode(units.subspan(begin, len));
    if (vectors.size() != len)
      throw IntegrityError("batch " + std::to_string(b) + ": provider returned " + std::to_string(vectors.size()) +
                           " vectors for " + std::to_string(len) + " texts");
    results[b] = std::move(vectors);
  };

  for (std::size_t wave = 0; wave < n_batches; wave += max_in_flight) {
    const std::size_t end = std::min(n_batches, wave + max_in_flight);
    if (end - wave == 1) {
      run_batch(wave);
      continue;
    }
    std::vector<std::future<void>> inflight;
    for (std::size_t b = wave; b < end; ++b) inflight.push_back(std::async(std::launch::async, run_batch, b));
    for (auto& f : inflight) f.get();
  }

  const std::size_t dim = results.front().front().size();
  if (dim == 0) throw IntegrityError("provider returned empty vectors");
  std::vector<float> data;
  data.reserve(units.size() * dim);
  std::size_t index = 0;
  for (const auto& batch : results) {
    for (const auto& v : batch) {
      if (v.size() != dim)
        throw IntegrityError("dimension mismatch at text index " + std::to_string(index) + ": got " +
                             std::to_string(v.size()) + ", expected " + std::to_string(dim));
      data.insert(data.end(), v.begin(), v.end());
      ++index;
    }
  }
  std::vector<std::string> ids;
  ids.reserve(units.size());
  for (const auto& u : units) ids.push_back(u.id);
  return EmbeddingMatrix::normalized(std::move(ids), dim, std::move(data));
}

EmbeddingMatrix embed_texts(std::span<const TextUnit> units, const ProviderConfig& config) {
  auto backend = make_backend(config);
  return embed_texts(units, *backend, config.batch_size, config.max_in_flight);
}

}  // namespace xdalign
