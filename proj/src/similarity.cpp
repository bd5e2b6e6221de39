#include "xdalign/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "xdalign/error.hpp"
#include "xdalign/text.hpp"

namespace xdalign {

namespace {

template <typename T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("cosine_score: dimension mismatch " + std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()));
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += static_cast<double>(u[k]) * v[k];
    nu += static_cast<double>(u[k]) * u[k];
    nv += static_cast<double>(v[k]) * v[k];
  }
  if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine_score: zero vector");
  return std::clamp(100.0 * dot / (std::sqrt(nu) * std::sqrt(nv)), -100.0, 100.0);
}

}  // namespace

double cosine_score(std::span<const float> u, std::span<const float> v) { return cosine_impl(u, v); }
double cosine_score(std::span<const double> u, std::span<const double> v) { return cosine_impl(u, v); }

SimilarityMatrix SimilarityMatrix::from_rows(std::vector<std::string> row_ids, std::vector<std::string> col_ids,
                                             const std::vector<std::vector<double>>& rows, std::string date) {
  SimilarityMatrix m{std::move(row_ids), std::move(col_ids), {}, std::move(date)};
  if (rows.size() != m.rows()) throw std::invalid_argument("row count does not match row ids");
  m.scores.reserve(m.rows() * m.cols());
  for (const auto& r : rows) {
    if (r.size() != m.cols()) throw std::invalid_argument("column count does not match column ids");
    for (const double s : r) {
      if (!(s >= -100.0 && s <= 100.0)) throw std::invalid_argument("score outside [-100, 100]");
      m.scores.push_back(s);
    }
  }
  return m;
}

std::map<std::string, DateBucket> bucket_by_date(const std::vector<Document>& docs, const LanguagePair& langs) {
  std::map<std::string, DateBucket> buckets;
  for (const auto& d : docs) {
    auto& b = buckets[d.publish_date];
    b.date = d.publish_date;
    if (d.lang == langs.source)
      b.source_ids.push_back(d.id);
    else if (d.lang == langs.target)
      b.target_ids.push_back(d.id);
  }
  return buckets;
}

SimilarityMatrix similarity_matrix(const std::vector<std::string>& row_ids, const std::vector<std::string>& col_ids,
                                   const EmbeddingMatrix& embeddings, std::string date) {
  std::vector<std::span<const float>> rows, cols;
  rows.reserve(row_ids.size());
  cols.reserve(col_ids.size());
  for (const auto& id : row_ids) rows.push_back(embeddings.vector_for(id));
  for (const auto& id : col_ids) cols.push_back(embeddings.vector_for(id));

  SimilarityMatrix m{row_ids, col_ids, std::vector<double>(row_ids.size() * col_ids.size()), std::move(date)};
  // Rows are unit-normalized, so the cosine is a plain dot product.
  const std::size_t dim = embeddings.dim();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const float* a = rows[i].data();
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const float* b = cols[j].data();
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += static_cast<double>(a[k]) * b[k];
      m.at(i, j) = std::clamp(100.0 * dot, -100.0, 100.0);
    }
  }
  return m;
}

SimilarityMatrix similarity_matrix(const DateBucket& bucket, const EmbeddingMatrix& embeddings) {
  if (!bucket.alignable()) throw std::invalid_argument("bucket " + bucket.date + " has an empty side");
  return similarity_matrix(bucket.source_ids, bucket.target_ids, embeddings, bucket.date);
}

void dump_matrix_csv(const SimilarityMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "row_id";
  for (const auto& c : matrix.col_ids) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    out << matrix.row_ids[i];
    for (std::size_t j = 0; j < matrix.cols(); ++j) out << ',' << text::format_fixed(matrix.at(i, j), 4);
    out << '\n';
  }
}

}  // namespace xdalign
