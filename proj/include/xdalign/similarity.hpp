#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "xdalign/corpus.hpp"
#include "xdalign/embedding.hpp"

namespace xdalign {

// 100 * cos(u, v). Throws std::invalid_argument on a dimension mismatch or a
// zero vector.
double cosine_score(std::span<const float> u, std::span<const float> v);
double cosine_score(std::span<const double> u, std::span<const double> v);

// Dense row-major score matrix between the two sides of one date bucket.
struct SimilarityMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  std::vector<double> scores;
  std::string date;

  std::size_t rows() const { return row_ids.size(); }
  std::size_t cols() const { return col_ids.size(); }
  double at(std::size_t i, std::size_t j) const { return scores[i * col_ids.size() + j]; }
  double& at(std::size_t i, std::size_t j) { return scores[i * col_ids.size() + j]; }

  static SimilarityMatrix from_rows(std::vector<std::string> row_ids, std::vector<std::string> col_ids,
                                    const std::vector<std::vector<double>>& rows, std::string date = {});
};

struct DateBucket {
  std::string date;
  std::vector<std::string> source_ids;
  std::vector<std::string> target_ids;

  bool alignable() const { return !source_ids.empty() && !target_ids.empty(); }
};

// Partitions documents by publish_date; ids keep ingestion order. The map is
// ordered by date so iteration is deterministic.
std::map<std::string, DateBucket> bucket_by_date(const std::vector<Document>& docs, const LanguagePair& langs);

// scores[i][j] = cosine_score(vector(row_ids[i]), vector(col_ids[j])).
// Throws MissingVectorError naming the first id without a vector.
SimilarityMatrix similarity_matrix(const std::vector<std::string>& row_ids, const std::vector<std::string>& col_ids,
                                   const EmbeddingMatrix& embeddings, std::string date = {});
SimilarityMatrix similarity_matrix(const DateBucket& bucket, const EmbeddingMatrix& embeddings);

// CSV with a header row of column ids and one row per row id.
void dump_matrix_csv(const SimilarityMatrix& matrix, const std::filesystem::path& path);

}  // namespace xdalign
