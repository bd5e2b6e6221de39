#include "xdalign/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace xdalign {

namespace {

using Point = std::pair<double, double>;

// Ties among consecutive equal keys, as sum of t(t-1)/2.
template <typename It, typename Eq>
std::uint64_t tied_pairs(It first, It last, Eq eq) {
  std::uint64_t total = 0;
  while (first != last) {
    It run = first;
    std::uint64_t t = 0;
    while (run != last && eq(*run, *first)) {
      ++run;
      ++t;
    }
    total += t * (t - 1) / 2;
    first = run;
  }
  return total;
}

// Stable merge sort on .second; returns the number of inversions.
std::uint64_t sort_count_swaps(std::vector<Point>& v, std::vector<Point>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = sort_count_swaps(v, buf, lo, mid) + sort_count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j].second < v[i].second) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

}  // namespace

std::optional<double> align_ratio(std::size_t num_aligned, std::size_t total_sentences) {
  if (num_aligned > total_sentences)
    throw std::invalid_argument("align_ratio: " + std::to_string(num_aligned) + " aligned of " +
                                std::to_string(total_sentences) + " sentences");
  if (total_sentences == 0) return std::nullopt;
  return static_cast<double>(num_aligned) / static_cast<double>(total_sentences);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  // Welford-style running co-moments.
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    mx += dx / n;
    my += dy / n;
    sxx += dx * (x[i] - mx);
    syy += dy * (y[i] - my);
    sxy += dx * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau_b: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;

  std::vector<Point> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {x[i], y[i]};
  std::sort(v.begin(), v.end());

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t ties_x = tied_pairs(v.begin(), v.end(), [](const Point& a, const Point& b) { return a.first == b.first; });
  const std::uint64_t ties_xy = tied_pairs(v.begin(), v.end(), [](const Point& a, const Point& b) { return a == b; });

  std::vector<Point> buf(n);
  const std::uint64_t swaps = sort_count_swaps(v, buf, 0, n);
  const std::uint64_t ties_y =
      tied_pairs(v.begin(), v.end(), [](const Point& a, const Point& b) { return a.second == b.second; });

  if (ties_x == n0 || ties_y == n0) return std::nullopt;
  const double numerator = static_cast<double>(n0) - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                           static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) * std::sqrt(static_cast<double>(n0 - ties_y));
  return std::clamp(numerator / denom, -1.0, 1.0);
}

std::optional<double> sentence_length_correlation(const std::vector<SentencePair>& pairs) {
  std::vector<double> a, b;
  for (const auto& p : pairs) {
    a.push_back(static_cast<double>(p.src.char_len));
    b.push_back(static_cast<double>(p.tgt.char_len));
  }
  return pearson(a, b);
}

std::optional<double> monotonicity(const std::vector<SentencePair>& pairs) {
  std::vector<double> a, b;
  for (const auto& p : pairs) {
    a.push_back(static_cast<double>(p.src.idx));
    b.push_back(static_cast<double>(p.tgt.idx));
  }
  return kendall_tau_b(a, b);
}

PairMetrics compute_pair_metrics(const std::vector<SentencePair>& pairs, std::size_t src_total,
                                 std::size_t tgt_total, double analysis_threshold) {
  std::vector<SentencePair> kept;
  for (const auto& p : pairs)
    if (p.score >= analysis_threshold) kept.push_back(p);

  std::vector<std::size_t> src_idx, tgt_idx;
  for (const auto& p : kept) {
    src_idx.push_back(p.src.idx);
    tgt_idx.push_back(p.tgt.idx);
  }
  auto distinct = [](std::vector<std::size_t>& v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  };

  PairMetrics m;
  m.n_aligned = kept.size();
  m.align_ratio_src = align_ratio(distinct(src_idx), src_total);
  m.align_ratio_tgt = align_ratio(distinct(tgt_idx), tgt_total);
  m.length_corr = sentence_length_correlation(kept);
  m.monotonicity = monotonicity(kept);
  return m;
}

}  // namespace xdalign
