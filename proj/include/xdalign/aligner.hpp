#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "xdalign/corpus.hpp"
#include "xdalign/similarity.hpp"

namespace xdalign {

// Rows are the source language (DE in the default profile), columns the
// target language (FR).
enum class Strategy {
  AboveThreshold,  // every cell >= threshold (n:n)
  BestTarget,      // each target picks its best source ("Best-FR", n:1)
  BestSource,      // each source picks its best target ("Best-DE", 1:n)
  Union,           // BestSource | BestTarget
  Intersection,    // mutual best match (1:1)
};

inline constexpr Strategy kAllStrategies[] = {Strategy::AboveThreshold, Strategy::BestTarget, Strategy::BestSource,
                                              Strategy::Union, Strategy::Intersection};

std::string_view to_string(Strategy s);
// Accepts above-threshold, best-fr/best-tgt, best-de/best-src, union, intersection.
Strategy parse_strategy(std::string_view s);

struct PairSet {
  std::vector<DocPair> pairs;  // ordered by (row index, column index)
  Strategy strategy = Strategy::Intersection;
  double threshold = 0.0;
};

// A matched cell by position; the id-free core of `align`.
struct Cell {
  std::size_t row;
  std::size_t col;
  double score;
  bool operator==(const Cell&) const = default;
};

// Cells selected by `strategy`, comparing inclusively (score >= threshold).
// Argmax ties resolve to the lowest index. Result sorted by (row, col).
std::vector<Cell> align_cells(const SimilarityMatrix& matrix, double threshold, Strategy strategy);

// Throws std::invalid_argument when threshold is outside [0, 100].
PairSet align(const SimilarityMatrix& matrix, double threshold, Strategy strategy);

}  // namespace xdalign
