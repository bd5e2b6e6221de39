#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "xdalign/aligner.hpp"
#include "xdalign/cleanup.hpp"
#include "xdalign/metrics.hpp"
#include "xdalign/sentences.hpp"

namespace xdalign {

// Scores are written with 4 decimals, metrics with 6, so output bytes do
// not depend on platform float printing.
inline constexpr int kScoreDecimals = 4;
inline constexpr int kMetricDecimals = 6;

struct MetricsRow {
  DocPair pair;
  PairMetrics metrics;
};

std::string alignments_jsonl(const PairSet& pairs);
std::vector<DocPair> read_alignments(const std::filesystem::path& path);

std::string removed_jsonl(const std::vector<RemovedPair>& removed);

std::string sentence_pairs_jsonl(const std::vector<SentencePair>& pairs);
std::vector<SentencePair> read_sentence_pairs(const std::filesystem::path& path);

std::string metrics_jsonl(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

// Rounds to `decimals` places so nlohmann::json prints a stable short form.
double round_to(double value, int decimals);

}  // namespace xdalign
