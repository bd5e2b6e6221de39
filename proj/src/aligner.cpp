#include "xdalign/aligner.hpp"

#include <algorithm>
#include <stdexcept>

namespace xdalign {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::AboveThreshold:
      return "above-threshold";
    case Strategy::BestTarget:
      return "best-fr";
    case Strategy::BestSource:
      return "best-de";
    case Strategy::Union:
      return "union";
    case Strategy::Intersection:
      return "intersection";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "above-threshold" || s == "above") return Strategy::AboveThreshold;
  if (s == "best-fr" || s == "best-tgt") return Strategy::BestTarget;
  if (s == "best-de" || s == "best-src") return Strategy::BestSource;
  if (s == "union") return Strategy::Union;
  if (s == "intersection") return Strategy::Intersection;
  throw std::invalid_argument("unknown strategy: " + std::string(s));
}

std::vector<Cell> align_cells(const SimilarityMatrix& m, double threshold, Strategy strategy) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Cell> out;
  if (rows == 0 || cols == 0) return out;

  if (strategy == Strategy::AboveThreshold) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (m.at(i, j) >= threshold) out.push_back({i, j, m.at(i, j)});
    return out;
  }

  // Strict '>' keeps the first (lowest-index) maximum.
  std::vector<std::size_t> best_col(rows, 0), best_row(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double s = m.at(i, j);
      if (s > m.at(i, best_col[i])) best_col[i] = j;
      if (s > m.at(best_row[j], j)) best_row[j] = i;
    }
  }

  // Walk cells in (row, col) order so every strategy yields sorted output.
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double s = m.at(i, j);
      if (s < threshold) continue;
      const bool row_pick = best_col[i] == j;  // source i chose target j
      const bool col_pick = best_row[j] == i;  // target j chose source i
      bool keep = false;
      switch (strategy) {
        case Strategy::BestSource:
          keep = row_pick;
          break;
        case Strategy::BestTarget:
          keep = col_pick;
          break;
        case Strategy::Union:
          keep = row_pick || col_pick;
          break;
        case Strategy::Intersection:
          keep = row_pick && col_pick;
          break;
        case Strategy::AboveThreshold:
          keep = true;
          break;
      }
      if (keep) out.push_back({i, j, s});
    }
  }
  return out;
}

PairSet align(const SimilarityMatrix& matrix, double threshold, Strategy strategy) {
  if (!(threshold >= 0.0 && threshold <= 100.0))
    throw std::invalid_argument("threshold must lie in [0, 100], got " + std::to_string(threshold));
  PairSet result{{}, strategy, threshold};
  for (const auto& c : align_cells(matrix, threshold, strategy))
    result.pairs.push_back({matrix.row_ids[c.row], matrix.col_ids[c.col], c.score, matrix.date});
  return result;
}

}  // namespace xdalign
