#include "xdalign/tuner.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "xdalign/parallel.hpp"

namespace xdalign {

namespace {

using PairKey = std::pair<std::string, std::string>;

PairKey unordered_key(const std::string& a, const std::string& b) { return a <= b ? PairKey{a, b} : PairKey{b, a}; }

EvalMetrics make_metrics(std::size_t tp, std::size_t predicted, std::size_t gold) {
  EvalMetrics m;
  m.true_positives = tp;
  m.predicted = predicted;
  m.gold = gold;
  m.precision = predicted > 0 ? static_cast<double>(tp) / predicted : 0.0;
  m.recall = gold > 0 ? static_cast<double>(tp) / gold : 0.0;
  m.f1 = (m.precision + m.recall) > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

}  // namespace

EvalMetrics precision_recall_f1(const std::vector<DocPair>& predicted, const GoldSet& gold) {
  std::set<PairKey> keys;
  for (const auto& p : predicted) keys.insert(unordered_key(p.src_id, p.tgt_id));
  std::size_t tp = 0;
  for (const auto& [a, b] : keys) tp += gold.contains(a, b) ? 1 : 0;
  return make_metrics(tp, keys.size(), gold.size());
}

SweepResult sweep_threshold(const std::vector<SimilarityMatrix>& matrices, const GoldSet& gold, Strategy strategy,
                            std::size_t jobs) {
  if (gold.empty()) throw std::invalid_argument("sweep_threshold: gold set is empty");

  // Argmax choices do not depend on the threshold, so align once with no
  // cut-off and filter per grid point.
  std::map<PairKey, double> candidates;
  for (const auto& m : matrices) {
    for (const auto& c : align_cells(m, -std::numeric_limits<double>::infinity(), strategy)) {
      const auto key = unordered_key(m.row_ids[c.row], m.col_ids[c.col]);
      auto [it, inserted] = candidates.emplace(key, c.score);
      if (!inserted) it->second = std::max(it->second, c.score);
    }
  }
  std::vector<std::pair<double, bool>> scored;  // (score, in gold)
  scored.reserve(candidates.size());
  for (const auto& [key, score] : candidates) scored.emplace_back(score, gold.contains(key.first, key.second));

  SweepResult result;
  result.curve.resize(kSweepPoints);
  parallel_for(kSweepPoints, jobs, [&](std::size_t k) {
    const double theta = static_cast<double>(k) * kSweepStep;
    std::size_t predicted = 0, tp = 0;
    for (const auto& [score, hit] : scored) {
      if (score >= theta) {
        ++predicted;
        tp += hit ? 1 : 0;
      }
    }
    result.curve[k] = {theta, make_metrics(tp, predicted, gold.size())};
  });

  result.best_threshold = result.curve.front().threshold;
  result.best_f1 = result.curve.front().metrics.f1;
  for (const auto& point : result.curve) {
    if (point.metrics.f1 >= result.best_f1) {
      result.best_f1 = point.metrics.f1;
      result.best_threshold = point.threshold;
    }
  }
  return result;
}

}  // namespace xdalign
