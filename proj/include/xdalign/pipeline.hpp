#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xdalign/aligner.hpp"
#include "xdalign/cleanup.hpp"
#include "xdalign/corpus.hpp"
#include "xdalign/embedding.hpp"
#include "xdalign/io.hpp"
#include "xdalign/report.hpp"
#include "xdalign/sentences.hpp"
#include "xdalign/similarity.hpp"
#include "xdalign/tuner.hpp"

namespace xdalign {

// Effective configuration of a pipeline run. Defaults are the reference
// profile: intersection at 46, same-date buckets, 30-character sentence
// filter, analysis threshold 46, release of the top 15,000 pairs.
struct RunConfig {
  std::filesystem::path documents;
  LanguagePair languages;
  std::optional<std::filesystem::path> gold;
  ProviderConfig provider;                             // document (title+lead) vectors
  std::optional<std::filesystem::path> sentence_vectors;  // file mode sentence vectors
  Strategy strategy = Strategy::Intersection;
  double threshold = 46.0;
  bool use_tuned_threshold = false;
  std::size_t min_chars = 30;
  MinCharsRule min_chars_rule = MinCharsRule::EachSide;
  double analysis_threshold = 46.0;
  std::size_t top_k = 15000;
  std::size_t histogram_bins = 100;
  CleanupConfig cleanup;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> dump_matrices;
  std::size_t jobs = 1;

  // Relative paths in the file are resolved against `base_dir`.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  nlohmann::json to_json() const;
};

RunConfig load_run_config(const std::filesystem::path& path);

struct DocAlignment {
  PairSet pairs;
  std::vector<SimilarityMatrix> matrices;  // one per alignable date, date order
  std::size_t buckets = 0;
  std::size_t unalignable_buckets = 0;
};

// Buckets by date, builds each bucket's matrix, and aligns. Buckets are
// processed on up to `jobs` threads; output is identical for any `jobs`.
DocAlignment align_documents(const std::vector<Document>& docs, const LanguagePair& langs,
                             const EmbeddingMatrix& vectors, Strategy strategy, double threshold, std::size_t jobs,
                             const std::optional<std::filesystem::path>& dump_dir = std::nullopt);

std::vector<SentencePair> align_sentence_corpus(const std::vector<DocPair>& doc_pairs, const DocumentIndex& docs,
                                                const Segmenter& segmenter, const EmbeddingMatrix& sentence_vectors,
                                                std::size_t min_chars, MinCharsRule rule, std::size_t jobs);

// Per document pair metrics; `sentence_pairs` may contain pairs for other
// documents, only matching ones are used.
std::vector<MetricsRow> compute_metrics(const std::vector<DocPair>& doc_pairs,
                                        const std::vector<SentencePair>& sentence_pairs, const DocumentIndex& docs,
                                        const Segmenter& segmenter, double analysis_threshold);

struct ReportInputs {
  const std::vector<Document>* documents = nullptr;
  LanguagePair languages;
  std::vector<DocPair> alignments;  // all kept pairs
  std::vector<MetricsRow> metrics;
  double histogram_low = 46.0;
  std::size_t histogram_bins = 100;
  std::size_t top_k = 15000;
};

// Writes stats.csv, histogram.csv, scatter_*.csv, *.svg and summary.json into
// `out_dir`; returns the summary.
nlohmann::json write_report(const ReportInputs& inputs, const std::filesystem::path& out_dir);

struct RunManifest {
  nlohmann::json config;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // path relative to the manifest -> sha256
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::map<std::string, std::size_t> counts;
  std::string version = XDALIGN_VERSION;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& base, const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

// Runs every stage and writes outputs plus manifest.json into
// config.output_dir.
RunManifest run_pipeline(const RunConfig& config);

}  // namespace xdalign
