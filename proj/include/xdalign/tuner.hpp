#pragma once

#include <cstddef>
#include <vector>

#include "xdalign/aligner.hpp"
#include "xdalign/corpus.hpp"

namespace xdalign {

struct EvalMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

struct SweepPoint {
  double threshold;
  EvalMetrics metrics;
};

struct SweepResult {
  double best_threshold = 0.0;
  double best_f1 = 0.0;
  std::vector<SweepPoint> curve;  // 201 points: 0, 0.5, ..., 100
};

inline constexpr std::size_t kSweepPoints = 201;
inline constexpr double kSweepStep = 0.5;

// Scores are ignored; pairs match on the unordered id tuple. Duplicate
// predicted pairs are counted once.
EvalMetrics precision_recall_f1(const std::vector<DocPair>& predicted, const GoldSet& gold);

// Pools align(matrix, theta, strategy) over all matrices at each grid point.
// F1 ties go to the highest threshold. Throws std::invalid_argument for an
// empty gold set.
SweepResult sweep_threshold(const std::vector<SimilarityMatrix>& matrices, const GoldSet& gold, Strategy strategy,
                            std::size_t jobs = 1);

}  // namespace xdalign
