#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xdalign/corpus.hpp"
#include "xdalign/sentences.hpp"

namespace xdalign {

struct Histogram {
  std::vector<double> bin_edges;  // bins + 1 uniform edges from low to high
  std::vector<std::size_t> counts;
  std::size_t below = 0;  // scores < low
  std::size_t above = 0;  // scores > high

  std::size_t overflow() const { return below + above; }
  std::size_t total() const;
};

// Bin k holds [edge_k, edge_k+1); the last bin is closed on the right.
// Throws std::invalid_argument when bins == 0 or low >= high.
Histogram score_histogram(const std::vector<DocPair>& pairs, std::size_t bins, double low, double high);

// Score descending, then (src_id, tgt_id) ascending.
std::vector<DocPair> top_k(const std::vector<DocPair>& pairs, std::size_t k);

struct CorrelationResult {
  std::optional<double> r;
  std::vector<std::pair<double, double>> observations;
};

// Observations whose metric is nullopt are dropped before computing r.
CorrelationResult metric_correlation(const std::vector<double>& doc_scores,
                                     const std::vector<std::optional<double>>& metric_values);

struct LanguageStats {
  std::string lang;
  std::size_t articles = 0;
  std::size_t sentences = 0;
  std::optional<std::size_t> tokens;
  std::size_t characters = 0;
  std::size_t title_chars = 0;
  std::size_t lead_chars = 0;
  std::size_t content_chars = 0;
  std::size_t title_sentences = 0;
  std::size_t lead_sentences = 0;
  std::size_t content_sentences = 0;

  double avg(std::size_t total) const { return articles == 0 ? 0.0 : static_cast<double>(total) / articles; }
};

struct StatsTable {
  std::vector<LanguageStats> languages;  // source language first
};

// Counts tokens in a text; supplied by an external tokenizer integration.
using Tokenizer = std::function<std::size_t(std::string_view text, std::string_view lang)>;

// Statistics over the documents referenced by `pairs` (or every document
// when `pairs` is null). Character counts are code points over raw text;
// `sentences` counts content sentences.
StatsTable corpus_stats(const std::vector<Document>& docs, const LanguagePair& langs,
                        const std::vector<DocPair>* pairs, const Segmenter& segmenter,
                        const Tokenizer& tokenizer = nullptr);

std::string stats_csv(const std::vector<std::pair<std::string, StatsTable>>& subsets);
std::string histogram_csv(const Histogram& h);
std::string scatter_csv(const CorrelationResult& c, std::string_view metric_name);

std::string histogram_svg(const Histogram& h, std::optional<double> cutoff, std::string_view title);
std::string scatter_svg(const CorrelationResult& c, std::string_view x_label, std::string_view y_label,
                        std::string_view title);

}  // namespace xdalign
