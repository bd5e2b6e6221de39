#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "xdalign/sentences.hpp"

namespace xdalign {

struct PairMetrics {
  std::optional<double> align_ratio_src;
  std::optional<double> align_ratio_tgt;
  std::optional<double> length_corr;
  std::optional<double> monotonicity;
  std::size_t n_aligned = 0;
};

// num_aligned / total; nullopt when total is 0. Throws std::invalid_argument
// when num_aligned > total.
std::optional<double> align_ratio(std::size_t num_aligned, std::size_t total_sentences);

// Pearson r; nullopt for fewer than 2 points or zero variance on either side.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Kendall tau-b in O(n log n); nullopt for fewer than 2 points or when
// either variable is constant.
std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y);

std::optional<double> sentence_length_correlation(const std::vector<SentencePair>& pairs);
std::optional<double> monotonicity(const std::vector<SentencePair>& pairs);

// Keeps pairs with score >= analysis_threshold, then computes every metric.
PairMetrics compute_pair_metrics(const std::vector<SentencePair>& pairs, std::size_t src_total,
                                 std::size_t tgt_total, double analysis_threshold);

}  // namespace xdalign
