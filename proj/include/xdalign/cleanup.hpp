#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xdalign/aligner.hpp"
#include "xdalign/corpus.hpp"

namespace xdalign {

struct CleanupConfig {
  // Pairs at or above this score are checked for identical text. Values
  // above 100 switch the check off.
  double suspicious_score = 99.5;
  bool same_language_check = true;
  double trigram_overlap = 0.9;
  std::vector<std::string> error_markers;  // case-insensitive substrings

  void validate() const;
  static CleanupConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

CleanupConfig load_cleanup_config(const std::filesystem::path& path);

struct RemovedPair {
  DocPair pair;
  std::string reason;  // "identical-text" | "error-marker" | "same-language"
};

struct CleanupResult {
  PairSet kept;
  std::vector<RemovedPair> removed;
};

// Cosine between character-trigram count profiles of two lowercased texts.
double trigram_overlap(std::string_view a, std::string_view b);

// Throws ValidationError when a pair references an unknown id.
CleanupResult filter_faulty_pairs(const PairSet& pairs, const DocumentIndex& corpus, const CleanupConfig& config);

}  // namespace xdalign
